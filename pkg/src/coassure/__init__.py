"""coassure: safety-security co-assurance engine.

Links safety and security requirement catalogs through a shared
seven-type ontology, compiles the links into a discrete Bayesian network,
infers safety-state violation probabilities from security evidence, and
drives a four-state violation machine producing practitioner impact
reports.
"""

from .bbn import (
    Evidence,
    Network,
    Node,
    Posterior,
    VIOLATED,
    NOT_VIOLATED,
    brute_force_marginals,
    build_network,
    noisy_or_cpt,
    noisy_or_row,
    or_cpt,
    posterior_marginals,
    prior_cpt,
)
from .catalog import (
    Catalog,
    Domain,
    ReqType,
    Requirement,
    SecurityClass,
    catalog_to_doc,
    load_catalog,
    validate_catalog,
)
from .causal import (
    CausalGraph,
    CausalRelation,
    Condition,
    ConditionKind,
    RelationLabel,
    SyncPoint,
)
from .claims import ClaimRegistry, Confidence, StmClaim, StmFactor, model_element_ids
from .errors import (
    CoassureError,
    InconsistentEvidenceError,
    InferenceError,
    ModelError,
    NotFoundError,
    ParseError,
    TransitionError,
)
from .impact import (
    ImpactReport,
    Recommendation,
    WhatIfDiff,
    generate_report,
    recommend,
    what_if,
)
from .links import (
    CompileParams,
    Link,
    LinkTable,
    NetworkSpec,
    compile_network_spec,
    grouping_report,
    load_link_table,
    validate_links,
)
from .machine import (
    DEFAULT_SEVERITY_ORDER,
    EventKind,
    Machine,
    MachineEvent,
    SafetyState,
    STATE_GROUPS,
    classify,
    group_of,
    replay,
)
from .seeds import seed_catalog, seed_claims, seed_links

__version__ = "0.1.0"
