"""Exact verification workbench for skew group algebras of bound quiver algebras."""
from .errors import *  # noqa: F401,F403
from .exactfield import DEFAULT_FIELD, FieldSpec, Span
from .quivalg import Algebra, Quiver, RelationSet, gabriel_quiver, path_basis
from .groupact import (FiniteAbelianGroup, QuiverAction, SkewAlgebraBundle, double_skew_check,
                       dual_action, skew_algebra)
from .repcat import (FDModule, decompose, hom_space, modules_isomorphic, pushdown_full, restrict,
                     twist)
from .morphcat import MorphismObject, h_pushdown, hhom_space
from .functcat import FPFunctor, evaluate, nat_trans_space, phi
from .brauer import Grading, SkewBrauerGraph, bg_algebra, double_cover, skew_bg_algebra
from .workspace import Workspace, parse_text, parse_workspace, serialize
from .suites import SUITES, run_suite

__version__ = "0.1.0"
