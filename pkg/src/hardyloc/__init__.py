"""Numerical laboratory for weighted local Hardy space operators.

Core layers: uniform-grid fields with fast and oracle convolutions
(:mod:`hardyloc.grid`), local Muckenhoupt weights (:mod:`hardyloc.weights`),
maximal operators and the weighted h^1 norm (:mod:`hardyloc.maximal`),
truncated Riesz transforms (:mod:`hardyloc.riesz`), weighted atoms
(:mod:`hardyloc.atoms`), the strongly singular oscillatory operator
(:mod:`hardyloc.singular`), and the experiment harness
(:mod:`hardyloc.harness`, CLI ``hardyloc``).
"""

from .atoms import (
    AtomSpec,
    ValidationReport,
    atom_h1_bound_experiment,
    make_atom,
    make_single_atom,
    snapped_atom_cube,
    validate_atom,
)
from .grid import (
    Cube,
    GridFunction,
    GridMismatchError,
    convolve_fast,
    convolve_oracle,
    indicator_box,
    integrate,
    make_grid,
    realized_cube,
    sample,
    snap_cube,
)
from .harness import ExperimentConfig, ExperimentReport, lemma21_properties, run, theorem1_equivalence
from .maximal import BumpSpec, ScaleLadder, h1_norm, local_hl_maximal, smooth_maximal
from .riesz import (
    CutoffSpec,
    RieszKernel,
    atom_decay_check,
    kernel_bound_check,
    make_cutoff,
    make_riesz_kernel,
    riesz_transform,
    smoothed_kernel,
)
from .singular import (
    StrongKernelSpec,
    sample_strong_kernel,
    strong_boundedness_experiment,
    strong_kernel_eval,
    strong_transform,
)
from .weights import (
    Weight,
    WeightFamily,
    ap_loc_constant,
    cube_measure,
    lp_norm,
    make_weight,
    weak_l1_norm,
)

__version__ = "0.1.0"

__all__ = [
    "AtomSpec",
    "BumpSpec",
    "Cube",
    "CutoffSpec",
    "ExperimentConfig",
    "ExperimentReport",
    "GridFunction",
    "GridMismatchError",
    "RieszKernel",
    "ScaleLadder",
    "StrongKernelSpec",
    "ValidationReport",
    "Weight",
    "WeightFamily",
    "ap_loc_constant",
    "atom_decay_check",
    "atom_h1_bound_experiment",
    "convolve_fast",
    "convolve_oracle",
    "cube_measure",
    "h1_norm",
    "indicator_box",
    "integrate",
    "kernel_bound_check",
    "lemma21_properties",
    "local_hl_maximal",
    "lp_norm",
    "make_atom",
    "make_cutoff",
    "make_grid",
    "make_riesz_kernel",
    "make_single_atom",
    "make_weight",
    "realized_cube",
    "riesz_transform",
    "run",
    "sample",
    "sample_strong_kernel",
    "smooth_maximal",
    "smoothed_kernel",
    "snap_cube",
    "snapped_atom_cube",
    "strong_boundedness_experiment",
    "strong_kernel_eval",
    "strong_transform",
    "theorem1_equivalence",
    "validate_atom",
    "weak_l1_norm",
]
