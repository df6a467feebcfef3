"""Spectra of the Dirac operator with infinite-mass walls on thin tubes around planar loops."""
from .geometry import (ArclengthFrame, Curve, GeometryError, TubeOverlapWarning, build_frame,
                       epsilon_max, make_circle, make_curve, make_ellipse, tubular_map)
from .numerics import NumericalError
from .transverse import TransverseMode, transverse_eigenvalue, transverse_eigenvalue_series, transverse_mode
from .effective1d import EffectiveSpectrum, effective_spectrum, effective_spectrum_circle_exact
from .strip2d import StripProblem, StripSpectrum, sandwich_bounds, strip_spectrum
from .asymptotics import ExpansionCoefficients, fit_expansion, predicted_Ej, verify_theorem

__version__ = "0.1.0"
