"""Čech-Spanier workbench: nerves of finite covers of simplicial complexes,
Spanier and thick Spanier groups, U-homotopy, and finite-depth probes of the
first shape group."""

from .complex import (EdgePath, SimplicialComplex, SimplicialMap, barycentric_subdivide,
                      build_complex, carrier, edge_path, iterated_subdivision)
from .corpus import WorkspaceManifest, corpus
from .cover import (CombinatorialCover, build_nerve, canonical_vertex_map,
                    intersection_components, is_barycentric_refinement, projection_map,
                    refines, star_cover)
from .groups import (IN, NOT_IN, UNKNOWN, Budget, NormalSubgroup, Word, edge_path_group,
                     induced_hom, membership, smith_normal_form, todd_coxeter)
from .spanier import (absorb_into_coarser, exactness_report, face_loop_basis,
                      lift_nerve_loop, spanier_generators, split_thick_generator,
                      thick_generator, thick_spanier_generators)
from .tower import (CoverTower, build_star_tower, is_open_subgroup, ker_psi_probe,
                    psi_image, shape_injectivity_probe)
from .uhomotopy import UChain, null_u_homotopic_bounded, nu_membership, step_equivalent

__version__ = "0.1.0"
