"""Exact spectra of quantum DNLS and Ablowitz-Ladik dimers."""

from ._qdimer import (
    DeformationParameter,
    Model,
    Spectrum,
    TridiagonalHamiltonian,
    UsageError,
    __version__,
    basic_qnum,
    build_dimer,
    chain_energies_from_dimer,
    chain_spectrum,
    characteristic_polynomial,
    completeness_check,
    conservation_suite,
    dense_oracle,
    df_orthonormality_check,
    eigenvalues,
    epsilon_factors,
    format_number,
    gaps,
    gershgorin_bounds,
    max_eigen_residual,
    min_gap,
    parity_structure_check,
    parse_model,
    q_binomial,
    q_factorial,
    q_from_gamma,
    sector_dimension,
    solve,
    sweep,
    sym_qnum,
    verify,
)

DNLS = Model.DNLS
AL = Model.AL

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
