"""Impulse-noise detection and repair on 8-connected pixel graphs.

Pixels whose merge with their neighbours would lower Newman modularity are
flagged as damaged and recoloured by a scan over the neighbours' value range.
"""

from .errors import (
    DegenerateGraphError,
    GraphSizeError,
    ImpulseGraphError,
    PnmError,
    UndefinedImprovementError,
)
from .image import DamageMask, Image, Rgb, get_pixel, load_pnm, read_image, save_pnm, write_image
from .lattice import GraphConfig, edge_weight, global_graph, neighbors, window_graph
from .modularity import ModularityMatrix, delta_q, delta_q_direct, modularity, normalize, screed
from .impulse import FilterConfig, decide, denoise, detect, pixel_deltas, restore, restore_pixel
from .median import median_filter, window_median
from .metrics import EvalReport, evaluate, image_distance, mask_scores, relative_improvement
from .noise import Lcg, NoiseSpec, inject, lcg_next, sample_damage
from .synthetic import SyntheticSpec, generate_synthetic
from .bench import BenchRow, run_bench

__version__ = "0.1.0"
