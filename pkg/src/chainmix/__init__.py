"""chainmix: exact chi-square mixing analysis for Markov chains with polynomial eigenfunctions."""

from .chains import (BLDownUp, BLLevel, BLUpDown, Ehrenfest, GibbsDM, Hubbell,
                     ImageGibbsModel, Moran, NormalAR, PolyaDownUp, PolyaLevel,
                     PolyaUpDown, build_transition_matrix, image_gibbs_model,
                     normal_ar_check, state_space, stationary_pmf, step,
                     transition_row, watterson)
from .convergence import (ChiSquareCurve, MixingBound, chisq_curve, chisq_exact,
                          chisq_normal_ar, mixing_bounds, remark_estimate,
                          steps_to_epsilon, tv_upper)
from .distributions import (DirichletParams, GaussianParams, SimplexPoint,
                            make_stream, sample)
from .kernels import CapacityError, KernelFamily, kernel, kernel_diag_start
from .numerics import (LogScalar, count_bounded_compositions,
                       enumerate_compositions, falling_factorial,
                       multinomial_coefficient, rising_factorial)
from .orthopoly import (hahn_multi, hahn_norm2, hahn_uni, hermite,
                        hermite_square_gf, jacobi_multi, jacobi_norm2,
                        krawtchouk_multi, krawtchouk_norm2)
from .spectra import (SpectralTerm, eigenvalues, normal_ar_spectrum,
                      verify_eigenfunctions)

__version__ = "0.1.0"

__all__ = [
    "BLDownUp", "BLLevel", "BLUpDown", "CapacityError", "ChiSquareCurve",
    "DirichletParams", "Ehrenfest", "GaussianParams", "GibbsDM", "Hubbell",
    "ImageGibbsModel", "KernelFamily", "LogScalar", "MixingBound", "Moran",
    "NormalAR", "PolyaDownUp", "PolyaLevel", "PolyaUpDown", "SimplexPoint",
    "SpectralTerm", "build_transition_matrix", "chisq_curve", "chisq_exact",
    "chisq_normal_ar", "count_bounded_compositions", "enumerate_compositions",
    "eigenvalues", "falling_factorial", "hahn_multi", "hahn_norm2", "hahn_uni",
    "hermite", "hermite_square_gf", "image_gibbs_model", "jacobi_multi",
    "jacobi_norm2", "kernel", "kernel_diag_start", "krawtchouk_multi",
    "krawtchouk_norm2", "make_stream", "mixing_bounds", "multinomial_coefficient",
    "normal_ar_check", "normal_ar_spectrum", "remark_estimate", "rising_factorial",
    "sample", "state_space", "stationary_pmf", "step", "steps_to_epsilon",
    "transition_row", "tv_upper", "verify_eigenfunctions", "watterson",
]
