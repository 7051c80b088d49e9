"""Discovery of local process models: small, frequent behavioural patterns in event logs."""

from .errors import ConfigurationError, ContractViolation, LogParseError, LPMError, ResourceLimitError
from .eventlog import (
    Activity,
    EventLog,
    Trace,
    activity_count,
    group_by_resource_day,
    parse_csv,
    parse_xes,
    parse_xes_events,
    project,
    read_log,
    total_events,
)
from .export import export_dot, export_json
from .metrics import EvalConfig, MetricWeights, QualityReport, evaluate, rank
from .miner import MinerConfig, MiningResult, SelectedModel, mine, prune_operators
from .petrinet import AcceptingPetriNet, Marking, PetriNet, add_backloop, net_language, to_petri_net
from .segmentation import Segmentation, replay_stats, segment, segment_bruteforce
from .tree import (
    Leaf,
    Node,
    Op,
    ProcessTree,
    Shape,
    and_,
    canonical_form,
    expansions,
    language,
    loop,
    parse_tree,
    seq,
    to_text,
    xor,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
