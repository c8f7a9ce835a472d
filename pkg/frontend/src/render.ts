/**
 * Pure string renderers. Everything here takes a view model and returns
 * HTML; nothing touches the DOM, which keeps the lot testable in node.
 */

import type { RunFollower, RunListModel, StepBlock } from "./model.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function statusChip(status: string | null): string {
  const label = status ?? "connecting";
  return `<span class="chip chip-${escapeHtml(label)}">${escapeHtml(label)}</span>`;
}

export function renderRunList(model: RunListModel): string {
  if (model.error !== null) {
    return (
      `<div class="banner banner-error">Could not load runs: ` +
      `${escapeHtml(model.error)} <button data-act="reload">retry</button></div>`
    );
  }
  if (model.rows.length === 0) {
    return `<p class="empty">No runs yet.</p>`;
  }
  const rows = model.rows
    .map(
      (row) =>
        `<tr data-run="${escapeHtml(row.runId)}">` +
        `<td><a href="#run/${escapeHtml(row.runId)}">${escapeHtml(row.title)}</a></td>` +
        `<td>${statusChip(row.status)}</td>` +
        `<td class="num">${row.lastSeq}</td>` +
        `</tr>`,
    )
    .join("");
  return (
    `<table class="runs"><thead><tr>` +
    `<th>run</th><th>status</th><th>events</th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

function renderStep(block: StepBlock): string {
  const parts: string[] = [];
  if (block.actionName !== undefined) {
    const input = block.actionInput ? JSON.stringify(block.actionInput) : "{}";
    parts.push(
      `<p class="action"><b>${escapeHtml(block.actionName)}</b> ` +
        `<code>${escapeHtml(input)}</code></p>`,
    );
  }
  if (block.observation !== undefined) {
    parts.push(`<pre class="observation">${escapeHtml(block.observation)}</pre>`);
  }
  if (block.summary) {
    parts.push(
      `<p class="summary">${escapeHtml(block.summary.reasoning)} / ` +
        `${escapeHtml(block.summary.action)}</p>`,
    );
  }
  if (block.turn !== undefined) {
    parts.push(`<details class="raw"><summary>raw turn</summary>` +
      `<pre>${escapeHtml(block.turn)}</pre></details>`);
  }
  const title = block.actionName ? `: ${escapeHtml(block.actionName)}` : "";
  return (
    `<details class="step" open><summary>step ${block.step}${title}</summary>` +
    parts.join("") +
    `</details>`
  );
}

export function renderTranscript(model: RunFollower): string {
  return model.steps().map(renderStep).join("");
}

export function renderPendingHelp(model: RunFollower): string {
  // the banner exists only while an awaiting_feedback state is confirmed
  if (!model.pendingHelp) return "";
  return (
    `<div class="banner banner-help" data-reply-to="${model.pendingHelp.seq}">` +
    `<b>Agent asked for help at step ${model.pendingHelp.step}:</b> ` +
    `${escapeHtml(model.pendingHelp.request)}` +
    `</div>`
  );
}

export function renderComposer(model: RunFollower): string {
  if (model.isTerminal) return "";
  const reply =
    model.composer.inReplyTo !== null
      ? ` data-reply-to="${model.composer.inReplyTo}"`
      : "";
  return (
    `<form class="composer"${reply}>` +
    `<textarea name="text">${escapeHtml(model.composer.draft)}</textarea>` +
    `<button type="submit">send feedback</button>` +
    `</form>`
  );
}

export function renderFeedback(model: RunFollower): string {
  if (model.feedback.length === 0) return "";
  const items = model.feedback
    .map(
      (note) =>
        `<li><b>${escapeHtml(note.author)}</b>: ${escapeHtml(note.text)}</li>`,
    )
    .join("");
  return `<ul class="feedback">${items}</ul>`;
}

export function renderAudit(model: RunFollower): string {
  if (model.auditIssues.length === 0) return "";
  const items = model.auditIssues
    .map(
      (issue) =>
        `<li>seq ${issue.seq} arrived where ${issue.expected} was expected ` +
        `(${escapeHtml(issue.note)})</li>`,
    )
    .join("");
  return `<div class="banner banner-warn"><b>Stream order anomalies:</b>` +
    `<ul>${items}</ul></div>`;
}

export function renderRunPage(model: RunFollower): string {
  return (
    `<header>${statusChip(model.status)}</header>` +
    renderAudit(model) +
    renderTranscript(model) +
    renderFeedback(model) +
    renderPendingHelp(model) +
    renderComposer(model)
  );
}
