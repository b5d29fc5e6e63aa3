"""divrisk: divergence-based coherent risk measures on empirical distributions.

Evaluates the risk functional inf_{t>0, mu} t*(beta + mu + E psi(X/t - mu))
for a divergence function phi with conjugate psi, together with its dual
representation over the divergence ball {E Z = 1, E phi(Z) <= beta, Z >= 0},
the associated Orlicz-type norms and dual norm, and risk-minimal portfolio
weights.  Every optimiser-based result has a brute-force or closed-form
oracle in the test suite.
"""

from .divergence import (
    DivergenceSpec,
    YoungPair,
    discrete_divergence,
    divergence_from_callables,
    make_builtin_divergence,
    numeric_conjugate,
    young_pair,
)
from .empirical import EmpiricalDistribution, StepSpectrum, from_csv, from_samples
from .errors import (
    DataError,
    DivriskError,
    InvalidParameterError,
    NumericsError,
    OracleSizeError,
    SpectrumError,
    StaleMultiplierError,
    UnsupportedDivergenceError,
)
from .risk import (
    RiskEvaluation,
    alpha_bar,
    evaluate_primal,
    evaluate_primal_batch,
    is_attained,
    solve_characterizing_equations,
)
from .dual import (
    DualSolution,
    brute_force_dual,
    divergence_ball_form,
    optimal_density,
    solve_dual,
)
from .norms import (
    NormReport,
    dual_norm,
    luxemburg_norm,
    norm_report,
    orlicz_norm,
    phi_beta_norm,
    truncation_level,
    young_norm_bound,
)
from .portfolio import (
    AssetPanel,
    PortfolioSolution,
    grid_oracle_portfolio,
    minimize_portfolio_risk,
    panel_from_csv,
)

__version__ = "0.1.0"

__all__ = [
    "DivergenceSpec",
    "YoungPair",
    "make_builtin_divergence",
    "divergence_from_callables",
    "numeric_conjugate",
    "young_pair",
    "discrete_divergence",
    "EmpiricalDistribution",
    "StepSpectrum",
    "from_samples",
    "from_csv",
    "RiskEvaluation",
    "evaluate_primal",
    "evaluate_primal_batch",
    "solve_characterizing_equations",
    "alpha_bar",
    "is_attained",
    "DualSolution",
    "solve_dual",
    "optimal_density",
    "brute_force_dual",
    "divergence_ball_form",
    "NormReport",
    "phi_beta_norm",
    "luxemburg_norm",
    "orlicz_norm",
    "young_norm_bound",
    "dual_norm",
    "truncation_level",
    "norm_report",
    "AssetPanel",
    "PortfolioSolution",
    "minimize_portfolio_risk",
    "grid_oracle_portfolio",
    "panel_from_csv",
    "DivriskError",
    "UnsupportedDivergenceError",
    "InvalidParameterError",
    "DataError",
    "SpectrumError",
    "OracleSizeError",
    "StaleMultiplierError",
    "NumericsError",
]
