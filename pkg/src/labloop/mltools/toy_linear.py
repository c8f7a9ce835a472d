"""A tiny gradient-descent linear trainer.

This is the one learner shipped with the package; it exists so the
end-to-end suite can train something real without any ML stack. Plain
full-batch gradient descent on mean squared error, optional linear
learning-rate warmup and L2 weight decay.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class LinearFit:
    w: float
    b: float
    losses: list[float] = field(default_factory=list)

    def predict(self, xs: list[float]) -> list[float]:
        return [self.w * x + self.b for x in xs]


def mse_loss(w: float, b: float, xs: list[float], ys: list[float]) -> float:
    n = len(xs)
    return sum((w * x + b - y) ** 2 for x, y in zip(xs, ys)) / n


def fit_linear(
    xs: list[float],
    ys: list[float],
    learning_rate: float = 0.1,
    epochs: int = 200,
    warmup_steps: int = 0,
    weight_decay: float = 0.0,
) -> LinearFit:
    """Fit y = w*x + b by full-batch gradient descent."""
    if len(xs) != len(ys) or not xs:
        raise ValueError("xs and ys must be non-empty and equal-length")
    if learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    if epochs < 1:
        raise ValueError("epochs must be at least 1")
    n = len(xs)
    w = 0.0
    b = 0.0
    losses = []
    for epoch in range(epochs):
        if warmup_steps > 0:
            lr = learning_rate * min(1.0, (epoch + 1) / warmup_steps)
        else:
            lr = learning_rate
        grad_w = 2.0 / n * sum((w * x + b - y) * x for x, y in zip(xs, ys))
        grad_b = 2.0 / n * sum(w * x + b - y for x, y in zip(xs, ys))
        grad_w += 2.0 * weight_decay * w
        w -= lr * grad_w
        b -= lr * grad_b
        losses.append(mse_loss(w, b, xs, ys))
    return LinearFit(w=w, b=b, losses=losses)
