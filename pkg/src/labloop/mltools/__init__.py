from .datasets import (
    MANIFEST_NAME,
    PROCESSED_INPUT_COLUMN,
    PROCESSED_OUTPUT_COLUMN,
    AlignmentCheck,
    AlignmentReport,
    dataset_candidate,
    load_manifest,
    post_checkup,
    process_dataset,
    read_split,
    required_splits,
    retrieve_dataset,
    write_dataset,
)
from .hub import (
    DatasetCandidate,
    HttpHub,
    HubProvider,
    ModelCandidate,
    StubHub,
    rank_records,
)
from .taskpkg import DIRECTIONS, META_NAME, TaskPackage, load_task_package
from .toy_linear import LinearFit, fit_linear, mse_loss
from .training import (
    HYPERPARAMETER_FLAGS,
    METRICS,
    MODEL_FILE,
    accuracy,
    evaluate_predictions,
    execute_on_test,
    mean_squared_error,
    pearson,
    retrieve_model,
    root_mean_squared_error,
    train_model,
)

__all__ = [
    "MANIFEST_NAME",
    "PROCESSED_INPUT_COLUMN",
    "PROCESSED_OUTPUT_COLUMN",
    "AlignmentCheck",
    "AlignmentReport",
    "dataset_candidate",
    "load_manifest",
    "post_checkup",
    "process_dataset",
    "read_split",
    "required_splits",
    "retrieve_dataset",
    "write_dataset",
    "DatasetCandidate",
    "HttpHub",
    "HubProvider",
    "ModelCandidate",
    "StubHub",
    "rank_records",
    "DIRECTIONS",
    "META_NAME",
    "TaskPackage",
    "load_task_package",
    "LinearFit",
    "fit_linear",
    "mse_loss",
    "HYPERPARAMETER_FLAGS",
    "METRICS",
    "MODEL_FILE",
    "accuracy",
    "evaluate_predictions",
    "execute_on_test",
    "mean_squared_error",
    "pearson",
    "retrieve_model",
    "root_mean_squared_error",
    "train_model",
]
