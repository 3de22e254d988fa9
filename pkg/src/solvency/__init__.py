"""Credit solvency scoring: encode, screen, grow a CART tree, evaluate.

The public surface is re-exported here; the CLI entry point lives in
solvency.cli.
"""

from . import cart, cli, dataset, evaluation, screening, synth
from .cart import (
    CartConfig,
    CartTree,
    SplitRule,
    TreeNode,
    best_split,
    deserialize,
    export_dot,
    export_text,
    gini,
    grow,
    predict_dataset,
    serialize,
    split_gini,
)
from .dataset import (
    DEFAULT_CODEBOOK,
    ClassDistribution,
    CleaningLog,
    CodeBook,
    Dataset,
    FeatureSpec,
    OutlierRule,
    Schema,
    apply_codebook,
    class_distribution,
    clean,
    load_csv,
    schema_from_header,
    write_csv,
)
from .errors import (
    ConfigError,
    DataError,
    NumericError,
    SolvencyError,
)
from .evaluation import (
    ConfusionMatrix,
    ErrorRates,
    Metrics,
    RocCurve,
    auc_se_ci,
    confusion,
    error_rates,
    metrics,
    report_json,
    report_table,
    roc,
)
from .screening import (
    CorrelationMatrix,
    LogisticFit,
    ScreeningOutcome,
    WaldRow,
    chi_square_sf_1df,
    fit_logistic,
    pearson_matrix,
    per_variable_wald,
    screen,
    wald_table,
)
from .synth import SynthSpec, default_spec, generate

__version__ = "0.1.0"

__all__ = [
    "CartConfig", "CartTree", "SplitRule", "TreeNode", "best_split",
    "deserialize", "export_dot", "export_text", "gini", "grow",
    "predict_dataset", "serialize", "split_gini",
    "DEFAULT_CODEBOOK", "ClassDistribution", "CleaningLog", "CodeBook",
    "Dataset", "FeatureSpec", "OutlierRule", "Schema", "apply_codebook",
    "class_distribution", "clean", "load_csv", "schema_from_header",
    "write_csv",
    "ConfigError", "DataError", "NumericError", "SolvencyError",
    "ConfusionMatrix", "ErrorRates", "Metrics", "RocCurve", "auc_se_ci",
    "confusion", "error_rates", "metrics", "report_json", "report_table",
    "roc",
    "CorrelationMatrix", "LogisticFit", "ScreeningOutcome", "WaldRow",
    "chi_square_sf_1df", "fit_logistic", "pearson_matrix",
    "per_variable_wald", "screen", "wald_table",
    "SynthSpec", "default_spec", "generate",
    "cart", "cli", "dataset", "evaluation", "screening", "synth",
]
