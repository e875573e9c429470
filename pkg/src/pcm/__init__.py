"""Piecewise conformal dynamics on the Riemann sphere."""

from .errors import GeometryError, PartitionError, SceneError, TruncationError
from .sphere import (INF, Arc, GenCircle, MapKind, MoebiusMap, SpherePoint,
                     as_point, chordal, circle_intersect, compose, map_circle)
from .piecewise import (ItinerarySeq, Partition, PiecewiseMap, Region,
                        detect_periodicity, sphere_samples,
                        two_region_partition)
from .prediscont import (ArcStratum, PointSample, alpha_probe, boundary_arcs,
                         pd_up_to, pullback_stratum, sample_pd)
from .fatou import (ClassifiedComponent, Component, ConnectivityReport,
                    ItineraryGrid, Viewport, classify_component, components,
                    connectivity, raster_itineraries)
from .kleinian import (GroupWord, LimitSetApprox, SchottkyPairing,
                       alpha_limit_probe, enumerate_words, limit_set_approx,
                       omega_limit_probe, schottky_check)
from .stability import (DeformationSpec, continuity_probe, directed_hausdorff,
                        hausdorff, structural_stability_probe)
from .scenes import (Scene, gallery, gallery_all, gallery_names, load_scene,
                     save_scene, scene_from_dict, scene_to_dict)
from .render import render_scene

__version__ = "0.1.0"
