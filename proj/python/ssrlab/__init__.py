"""Tabular exploration experiments with single-seed randomized value functions."""

from ._core import (
    ConfigError,
    Dims,
    EmpiricalModel,
    IoError,
    TabularMDP,
    alpha_k,
    clip,
    deep_sea,
    deep_sea_mask,
    gamma_k,
    optimal_values,
    policy_value,
    random_mdp,
    run_experiment,
    sigma_be,
    sigma_ho,
    ssr_plan,
    ucbvi_plan,
    variance,
)

__all__ = [
    "ConfigError",
    "Dims",
    "EmpiricalModel",
    "IoError",
    "TabularMDP",
    "alpha_k",
    "clip",
    "deep_sea",
    "deep_sea_mask",
    "gamma_k",
    "optimal_values",
    "policy_value",
    "random_mdp",
    "run_experiment",
    "sigma_be",
    "sigma_ho",
    "ssr_plan",
    "ucbvi_plan",
    "variance",
]
