"""Casimir energy and pressure between anisotropic dielectric films."""
from .dielectric import (
    AbsorptionSpectrum,
    DielectricError,
    DielectricTensorModel,
    ImaginaryAxisResponse,
    Oscillator,
    OscillatorSet,
    eval_oscillator,
    eval_tabulated,
    eval_tensor,
    london_transform,
)
from .lifshitz import (
    ForceCurve,
    ForcePoint,
    GapScenario,
    casimir_point,
    energy_per_area,
    force_ratio_curve,
    integrand_logdet,
    pressure,
    sweep,
)
from .quadrature import QuadratureConfig, QuadratureError, integrate_finite, integrate_semi_infinite
from .reflection import (
    HALF_SPACE,
    Film,
    PerfectMirror,
    reflection,
    slab_reflection_biaxial,
    slab_reflection_isotropic,
    slab_reflection_uniaxial,
)

__version__ = "0.1.0"
