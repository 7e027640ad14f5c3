"""Multi-threshold segmentation of NEQR-encoded grayscale images.

Builds exact gate-level circuits (preparation, less-than comparator, band
rewrites), simulates them on a dense statevector backend or an exact
basis-tracked backend, accounts gate costs against quoted closed forms, and
round-trips circuits through an OpenQASM 2.0 subset.
"""
from .circuit import (
    Circuit,
    Control,
    GateKind,
    GateOp,
    RegisterLayout,
    Stage,
    extract_bits,
    insert_bits,
    neg,
    pos,
)
from .comparator import ComparatorSpec, build_comparator, comparator_formula_cost
from .cost import CostLedger, GateCounts, mcx_weight, quantum_cost
from .image import ImageGray, read_image_pgm, write_image_pgm
from .neqr import build_preparation, decode
from .qasm import QasmParseError, export_circuit_text, lower, parse_circuit_text
from .segmentation import (
    ComparisonRow,
    PipelineCostFormulas,
    ThresholdConfig,
    build_pipeline,
    build_s1,
    build_s2,
    build_s3,
    classical_segment,
    comparison_table,
    default_thresholds,
    pipeline_cost_formulas,
)
from .statevector import (
    QuantumState,
    ShotRecord,
    probabilities,
    records_to_csv,
    run,
    sample_shots,
)
from .tracked import (
    Branch,
    BranchMap,
    CollisionError,
    apply_to_basis,
    assert_no_collision,
    run_tracked,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "BranchMap",
    "Circuit",
    "CollisionError",
    "ComparatorSpec",
    "ComparisonRow",
    "Control",
    "CostLedger",
    "GateCounts",
    "GateKind",
    "GateOp",
    "ImageGray",
    "PipelineCostFormulas",
    "QasmParseError",
    "QuantumState",
    "RegisterLayout",
    "ShotRecord",
    "Stage",
    "ThresholdConfig",
    "apply_to_basis",
    "assert_no_collision",
    "build_comparator",
    "build_pipeline",
    "build_preparation",
    "build_s1",
    "build_s2",
    "build_s3",
    "classical_segment",
    "comparator_formula_cost",
    "comparison_table",
    "decode",
    "default_thresholds",
    "export_circuit_text",
    "extract_bits",
    "insert_bits",
    "lower",
    "mcx_weight",
    "neg",
    "parse_circuit_text",
    "pipeline_cost_formulas",
    "pos",
    "probabilities",
    "quantum_cost",
    "read_image_pgm",
    "records_to_csv",
    "run",
    "run_tracked",
    "sample_shots",
    "write_image_pgm",
]
