"""curvetile: curved congruent tiles from wallpaper-symmetric Voronoi sites.

Strokes drawn in one fundamental domain are closed under a chosen plane
symmetry group, replicated over the lattice, and tessellated by exact
per-pixel nearest-site labeling; boundaries between regions are traced,
classified (straight vs curved), and checked for tile congruence.
"""

from ._backend import active_backend, set_workers
from .curves import CatmullRomChain, CubicBezier, HermiteSegment, catmullrom_to_beziers, flatten, hermite_to_bezier
from .errors import CurvetileError, NotSimpleError, OrbitOverlapError, PipelineError, ValidationError
from .geometry import (
    Isometry2,
    Point,
    Segment,
    SiteShape,
    apply_isometry,
    compose,
    distance_point_segment,
    distance_point_shape,
    validate_simple,
)
from .pipeline import PipelineResult, run_pipeline
from .render import Palette, RenderOptions, export_svg, make_palette, render_png
from .scene import SceneFile, StrokeSpec, parse_scene, scene_window, serialize_scene, stroke_to_shape
from .sites import DeloneReport, SiteSet, build_site_set, validate_delone
from .voronoi import (
    BoundaryArc,
    LabelMap,
    RasterSpec,
    equidistance_check,
    extract_boundaries,
    tessellate,
    tessellate_accelerated,
)
from .wallpaper import (
    GROUP_NAMES,
    GroupMeta,
    GroupTable,
    Lattice,
    Rect,
    SiteInstance,
    group_table,
    mirror_axes,
    orbit,
    replicate,
)
from .analysis import (
    CellOutline,
    CongruenceReport,
    StraightnessReport,
    congruence_check,
    extract_cells,
    group_survey,
    straightness_check,
)

__version__ = "0.1.0"
