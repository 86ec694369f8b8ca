"""Numerics for nonlocal minimal-surface geometry.

The package evaluates the fractional mean curvature of graph-like and
rotationally symmetric bodies, verifies positivity of a compactly
perturbed cone barrier, runs the sliding argument that turns that
positivity into a rigidity statement, and checks the flatness/rescaling
estimates used in the blow-down analysis.
"""

from .barrier import (BarrierReport, ConeConstantReport, ConeSweepReport,
                      build_barrier, cone_constant, derived_seed,
                      sweep_cone_constant, verify_barrier)
from .blowdown import (FlatnessReport, HolderReport, blowdown_rescale,
                       flatness_certificate, holder_rescaling_check,
                       rescaled_profile)
from .curvature import (CurvatureResult, QuadratureConfig, angular_rule,
                        graph_curvature, subgraph_curvature,
                        two_leaf_curvature)
from .errors import (DisjointnessError, FracsurfError, HomogeneityViolationError,
                     InitialInclusionError, InvalidCutoffError,
                     InvalidEnvelopeError, InvalidEpsilonError,
                     InvalidExponentError, InvalidPointError,
                     NonSmoothPointError, NotSublinearError,
                     UnsupportedGeometryError)
from .geometry import (AmbientDim, Ball, Body, BoundarySample, Complement,
                       Cone, FractionalOrder, HalfSpace, SampleSpec, Scaled,
                       Subgraph, TwoLeaf, boundary_sample)
from .kernelfn import SliceIntegral
from .oracle import (Box, EnergyResult, PerimeterResult, Region,
                     direct_curvature, interaction_energy, region_of,
                     relative_perimeter)
from .profiles import (BarrierProfile, BumpProfile, ConstantProfile,
                       DilatedGraphProfile, LinearProfile, ModulusReport,
                       PiecewisePolyProfile, RadialProfile, RampBumpProfile,
                       SampledProfile, SqrtProfile, SublinearEnvelope,
                       VerticalShiftProfile, profile_from_config,
                       profile_from_csv, profile_to_csv, profile_values,
                       sublinearity_modulus)
from .sliding import (RescalePlan, SlideOutcome, VERDICT_CONFIRMED,
                      VERDICT_TOUCH, VERDICT_UNBOUNDED, rescale_for_slide,
                      slide)

__version__ = "0.1.0"

__all__ = [
    "AmbientDim",
    "Ball",
    "BarrierProfile",
    "BarrierReport",
    "Body",
    "BoundarySample",
    "Box",
    "BumpProfile",
    "Complement",
    "Cone",
    "ConeConstantReport",
    "ConeSweepReport",
    "ConstantProfile",
    "CurvatureResult",
    "DilatedGraphProfile",
    "DisjointnessError",
    "EnergyResult",
    "FlatnessReport",
    "FracsurfError",
    "FractionalOrder",
    "HalfSpace",
    "HolderReport",
    "HomogeneityViolationError",
    "InitialInclusionError",
    "InvalidCutoffError",
    "InvalidEnvelopeError",
    "InvalidEpsilonError",
    "InvalidExponentError",
    "InvalidPointError",
    "LinearProfile",
    "ModulusReport",
    "NonSmoothPointError",
    "NotSublinearError",
    "PerimeterResult",
    "PiecewisePolyProfile",
    "QuadratureConfig",
    "RadialProfile",
    "RampBumpProfile",
    "Region",
    "RescalePlan",
    "SampleSpec",
    "SampledProfile",
    "Scaled",
    "SliceIntegral",
    "SlideOutcome",
    "SqrtProfile",
    "Subgraph",
    "SublinearEnvelope",
    "TwoLeaf",
    "UnsupportedGeometryError",
    "VERDICT_CONFIRMED",
    "VERDICT_TOUCH",
    "VERDICT_UNBOUNDED",
    "VerticalShiftProfile",
    "angular_rule",
    "blowdown_rescale",
    "boundary_sample",
    "build_barrier",
    "cone_constant",
    "derived_seed",
    "direct_curvature",
    "flatness_certificate",
    "graph_curvature",
    "holder_rescaling_check",
    "interaction_energy",
    "profile_from_config",
    "profile_from_csv",
    "profile_to_csv",
    "profile_values",
    "region_of",
    "relative_perimeter",
    "rescale_for_slide",
    "rescaled_profile",
    "slide",
    "subgraph_curvature",
    "sublinearity_modulus",
    "sweep_cone_constant",
    "two_leaf_curvature",
    "verify_barrier",
]
