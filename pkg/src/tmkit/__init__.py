"""Toolkit for machine-style conceptual models: a textual notation with a
parser and canonical printer, structural validation in strict and
simplified modes, gate normalization between them, an event/chronology
layer, a deterministic simulator with an independent ordering oracle, and
JSON/DOT/activity-diagram interchange.
"""

__version__ = "0.1.0"

from .analysis import (
    find_cycle_nodes,
    flow_paths,
    topological_order,
    weakly_connected_components,
)
from .dsl import ModelBundle, SourceSpan, parse, print_bundle, validate_bundle
from .dynamics import (
    BehaviorEdge,
    BehaviorModel,
    Event,
    Region,
    apply_default_bounds,
    define_event,
    loop_structures,
    validate_behavior,
)
from .errors import (
    DanglingReferenceError,
    DisconnectedRegionError,
    DuplicateIdError,
    InvalidInputError,
    MultipleInitialError,
    ParseError,
    SchemaError,
    SchemaVersionError,
    StepBudgetError,
    TmError,
    TooLargeError,
    UnboundedLoopError,
    UndefinedReferenceError,
    UnsupportedNodeError,
)
from .interop import (
    AdDocument,
    AdEdge,
    AdNode,
    AdPartition,
    bundle_to_obj,
    check_dot,
    export_dot,
    export_json,
    import_activity,
    import_json,
    load_ad_document,
    trace_to_json,
)
from .model import (
    ActionKind,
    ActionNode,
    Edge,
    EdgeKind,
    Mode,
    ModelBuilder,
    Severity,
    StaticModel,
    Thimac,
    ValidationReport,
    Violation,
)
from .normalize import EdgeExpansion, normalize, normalize_with_expansions
from .sim import (
    SimConfig,
    Trace,
    TraceStep,
    enumerate_orderings,
    simulate,
    trace_to_text,
)
from .validation import RULESET_VERSION, rules_for, validate_static

__all__ = [
    "__version__",
    "ActionKind",
    "ActionNode",
    "AdDocument",
    "AdEdge",
    "AdNode",
    "AdPartition",
    "BehaviorEdge",
    "BehaviorModel",
    "DanglingReferenceError",
    "DisconnectedRegionError",
    "DuplicateIdError",
    "Edge",
    "EdgeExpansion",
    "EdgeKind",
    "Event",
    "InvalidInputError",
    "Mode",
    "ModelBuilder",
    "ModelBundle",
    "MultipleInitialError",
    "ParseError",
    "Region",
    "RULESET_VERSION",
    "SchemaError",
    "SchemaVersionError",
    "Severity",
    "SimConfig",
    "SourceSpan",
    "StaticModel",
    "StepBudgetError",
    "Thimac",
    "TmError",
    "TooLargeError",
    "Trace",
    "TraceStep",
    "UnboundedLoopError",
    "UndefinedReferenceError",
    "UnsupportedNodeError",
    "ValidationReport",
    "Violation",
    "apply_default_bounds",
    "check_dot",
    "define_event",
    "enumerate_orderings",
    "export_dot",
    "bundle_to_obj",
    "export_json",
    "find_cycle_nodes",
    "flow_paths",
    "import_activity",
    "import_json",
    "load_ad_document",
    "loop_structures",
    "normalize",
    "normalize_with_expansions",
    "parse",
    "print_bundle",
    "rules_for",
    "simulate",
    "topological_order",
    "trace_to_json",
    "trace_to_text",
    "validate_behavior",
    "validate_bundle",
    "validate_static",
    "weakly_connected_components",
]
