"""Open baker maps: quantizations, spectra and transport."""

from ._core import (
    OpenBakerSpec,
    count_sector,
    dft_centered,
    eigenvalues,
    fractal_mu,
    open_map,
    open_map_compressed,
    toy_closed_spectrum,
    toy_matrix,
    transmission_matrix,
    transport_quantities,
    walsh,
)

__all__ = [
    "OpenBakerSpec",
    "count_sector",
    "dft_centered",
    "eigenvalues",
    "fractal_mu",
    "open_map",
    "open_map_compressed",
    "toy_closed_spectrum",
    "toy_matrix",
    "transmission_matrix",
    "transport_quantities",
    "walsh",
]
