"""One-class classification with universum contradictions."""

from ocuniv.complexity import (
    BoundReport,
    ClassBudget,
    ComplexityError,
    FeatureBatch,
    bound_report,
    build_v_matrix,
    erc_bound_ind,
    erc_bound_univ,
    erc_monte_carlo_ind,
    erc_monte_carlo_univ,
    k_gamma,
    sigma_gamma,
    sigma_inf,
    theorem1_rhs,
)
from ocuniv.datasets import (
    Dataset,
    DatasetError,
    GaussianSpec,
    LabeledTestSet,
    ScaleParams,
    UniversumSet,
    generate_gaussian,
    generate_noise_universum,
    load_csv,
    save_csv,
    scale_to_range,
    synthetic_preset,
)
from ocuniv.duality import (
    CoincidenceReport,
    DualityError,
    DualSolution,
    NuMapping,
    NuSolution,
    map_to_nu,
    solve_nu_svm,
    solve_oneclass_dual,
    verify_boundary_coincidence,
)
from ocuniv.evaluation import (
    EvalReport,
    EvaluationError,
    auc_roc,
    correlation_diagnostic,
    evaluate,
    margin_slacks,
)
from ocuniv.losses import (
    UniversumMargins,
    binary_cost_sensitive_loss,
    hinge_train_loss,
    softplus_train_loss,
    universum_loss,
    universum_loss_two_hinge,
)
from ocuniv.models import (
    FeatureMapSpec,
    Model,
    ModelError,
    ParamGrads,
    backward,
    decide,
    forward,
    frobenius_sq,
    init_model,
    load_model,
    save_model,
)
from ocuniv.reports import ConfigError, parse_config, read_report, write_report
from ocuniv.training import (
    Hyperparams,
    OptimizerSpec,
    TrainError,
    TrainTrace,
    objective_binary_baseline,
    objective_doc,
    objective_doc3,
    objective_gradients,
    train,
    train_binary_baseline,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ClassBudget",
    "CoincidenceReport",
    "ComplexityError",
    "ConfigError",
    "Dataset",
    "DatasetError",
    "DualSolution",
    "DualityError",
    "EvalReport",
    "EvaluationError",
    "FeatureBatch",
    "FeatureMapSpec",
    "GaussianSpec",
    "Hyperparams",
    "LabeledTestSet",
    "Model",
    "ModelError",
    "NuMapping",
    "NuSolution",
    "OptimizerSpec",
    "ParamGrads",
    "ScaleParams",
    "TrainError",
    "TrainTrace",
    "UniversumMargins",
    "UniversumSet",
    "auc_roc",
    "backward",
    "binary_cost_sensitive_loss",
    "bound_report",
    "build_v_matrix",
    "correlation_diagnostic",
    "decide",
    "erc_bound_ind",
    "erc_bound_univ",
    "erc_monte_carlo_ind",
    "erc_monte_carlo_univ",
    "evaluate",
    "forward",
    "frobenius_sq",
    "generate_gaussian",
    "generate_noise_universum",
    "hinge_train_loss",
    "init_model",
    "k_gamma",
    "load_csv",
    "load_model",
    "map_to_nu",
    "margin_slacks",
    "objective_binary_baseline",
    "objective_doc",
    "objective_doc3",
    "objective_gradients",
    "parse_config",
    "read_report",
    "save_csv",
    "save_model",
    "scale_to_range",
    "sigma_gamma",
    "sigma_inf",
    "softplus_train_loss",
    "solve_nu_svm",
    "solve_oneclass_dual",
    "synthetic_preset",
    "theorem1_rhs",
    "train",
    "train_binary_baseline",
    "universum_loss",
    "universum_loss_two_hinge",
    "verify_boundary_coincidence",
    "write_report",
]
