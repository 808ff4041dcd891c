"""Exact piecewise-constant volume forms on simplicial complexes, and their equalization."""
from .documents import (
    ChainDocument,
    MeshDocument,
    parse_chain,
    parse_mesh,
    read_mesh,
    write_chain,
    write_mesh,
)
from .equalizer import (
    Certificate,
    ChainStep,
    TransferChain,
    adjacency_path,
    equalize,
    evaluate_chain,
    find_extremes,
    verify_chain,
)
from .estimator import VolumeEqualizer
from .exceptions import PLVolumeError
from .forms import DiffCocycle, PCForm, diff_cocycle, pc_from_cocycle, pullback_cocycle, total_volume
from .generators import generate, grid_torus, moebius_strip, simplex_boundary, square_disk
from .render import render_svg
from .simplicial import (
    BaryPoint,
    Cell,
    Complex,
    barycenter,
    build_complex,
    euclidean_volume_approx,
    link,
    orient,
    relative_volume,
    star,
)
from .subdivision import PairSubdivision, SubdivisionRecord, pair_subdivide, stellar_subdivide
from .transfer import TransferMap, TransferSpec, evaluate_transfer, solve_transfer, verify_transfer

__version__ = "0.1.0"

__all__ = [
    "adjacency_path",
    "barycenter",
    "BaryPoint",
    "build_complex",
    "Cell",
    "Certificate",
    "ChainDocument",
    "ChainStep",
    "Complex",
    "diff_cocycle",
    "DiffCocycle",
    "equalize",
    "euclidean_volume_approx",
    "evaluate_chain",
    "evaluate_transfer",
    "find_extremes",
    "generate",
    "grid_torus",
    "link",
    "MeshDocument",
    "moebius_strip",
    "orient",
    "pair_subdivide",
    "PairSubdivision",
    "parse_chain",
    "parse_mesh",
    "pc_from_cocycle",
    "PCForm",
    "PLVolumeError",
    "pullback_cocycle",
    "read_mesh",
    "relative_volume",
    "render_svg",
    "simplex_boundary",
    "solve_transfer",
    "square_disk",
    "star",
    "stellar_subdivide",
    "SubdivisionRecord",
    "total_volume",
    "TransferChain",
    "TransferMap",
    "TransferSpec",
    "verify_chain",
    "verify_transfer",
    "VolumeEqualizer",
    "write_chain",
    "write_mesh",
]
