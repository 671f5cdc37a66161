"""Resource accounting for synthesized circuits.

Entangling cost is reported three ways:

* ``ecr_count``: number of ECR gates, regardless of angle.
* ``cnot_equiv``: total ECR rotation angle in units of pi/2, the angle a
  CNOT-grade entangling interaction accumulates.  A circuit built purely
  from quarter-pi ECR gates has ``cnot_equiv = ecr_count / 2``.
* ``sqrtx_equiv``: 90-degree x-pulses needed to play all physical local
  gates (virtual phases are free, level swaps cost two pulses each).
"""

import json
from dataclasses import asdict, dataclass
from importlib import resources

from . import gates
from .circuits import QuditCircuit, ValidationError
from .givens import _sqrtx_cost_of_angle


@dataclass(frozen=True)
class ResourceReport:
    ecr_count: int
    cnot_equiv: float
    sqrtx_equiv: int
    local_gate_count: int
    virtual_phase_count: int
    total_ecr_angle: float

    def to_dict(self) -> dict:
        return asdict(self)

    def __add__(self, other: "ResourceReport") -> "ResourceReport":
        return ResourceReport(
            ecr_count=self.ecr_count + other.ecr_count,
            cnot_equiv=self.cnot_equiv + other.cnot_equiv,
            sqrtx_equiv=self.sqrtx_equiv + other.sqrtx_equiv,
            local_gate_count=self.local_gate_count + other.local_gate_count,
            virtual_phase_count=self.virtual_phase_count + other.virtual_phase_count,
            total_ecr_angle=self.total_ecr_angle + other.total_ecr_angle,
        )


def count_resources(circuit: QuditCircuit) -> ResourceReport:
    """Tally the gate budget of a fully lowered circuit.

    Raises:
        ValidationError: if the circuit still contains abstract controlled
            blocks, which have no native cost.
    """
    import math

    ecr_count = 0
    total_angle = 0.0
    sqrtx = 0
    local = 0
    virtual = 0
    for op in circuit.ops:
        if op.kind == gates.CBLOCK:
            raise ValidationError(
                "circuit contains an abstract controlled block; lower it first"
            )
        if op.kind == gates.ECR:
            ecr_count += 1
            total_angle += abs(op.params["theta"])
        elif op.kind == gates.PHASE:
            virtual += 1
        elif op.kind == gates.PERM:
            local += 1
            sqrtx += 2
        elif op.kind == gates.RX:
            local += 1
            sqrtx += _sqrtx_cost_of_angle(op.params["phi"])
        else:
            raise ValidationError(f"unknown gate kind {op.kind!r}")
    return ResourceReport(
        ecr_count=ecr_count,
        cnot_equiv=total_angle / (math.pi / 2.0),
        sqrtx_equiv=sqrtx,
        local_gate_count=local,
        virtual_phase_count=virtual,
        total_ecr_angle=total_angle,
    )


def load_reference_counts() -> dict:
    """Published qubit- and ququart-processor gate counts for benchmarks."""
    text = resources.files("ququart").joinpath("data/reference_counts.json").read_text()
    return json.loads(text)


def benchmark_table(entries) -> dict:
    """Compare synthesized circuits against reference processor counts.

    Args:
        entries: iterable of ``(name, circuit)`` where ``name`` is a key of
            the reference table (e.g. ``random_su16``, ``lih_t10``).

    Returns:
        dict with one row per entry carrying our counts, the reference
        counts, and entangling/local reduction factors versus the qubit
        processor baseline.
    """
    reference = load_reference_counts()
    rows = []
    for name, circuit in entries:
        if name not in reference:
            raise ValidationError(f"no reference counts for workload {name!r}")
        ref = reference[name]
        report = count_resources(circuit)
        rows.append(
            {
                "workload": name,
                "ecr_count": report.ecr_count,
                "cnot_equiv": report.cnot_equiv,
                "sqrtx_equiv": report.sqrtx_equiv,
                "reference": ref,
                "entangling_reduction_vs_qubit": ref["qubit"]["cnot"] / report.cnot_equiv
                if report.cnot_equiv
                else float("inf"),
                "local_ratio_vs_qubit": report.sqrtx_equiv / ref["qubit"]["sqrtx"]
                if ref["qubit"]["sqrtx"]
                else float("inf"),
            }
        )
    return {"rows": rows}


def format_benchmark_table(table: dict) -> str:
    """Aligned text rendering of ``benchmark_table`` output."""
    header = (
        f"{'workload':<14} {'ECR':>5} {'CNOT-eq':>8} {'sqrtX':>6} "
        f"{'qubit CNOT':>10} {'qubit sqrtX':>11} {'ref CNOT-eq':>11} {'ref sqrtX':>9}"
    )
    lines = [header, "-" * len(header)]
    for row in table["rows"]:
        ref = row["reference"]
        lines.append(
            f"{row['workload']:<14} {row['ecr_count']:>5d} {row['cnot_equiv']:>8.1f} "
            f"{row['sqrtx_equiv']:>6d} {ref['qubit']['cnot']:>10d} "
            f"{ref['qubit']['sqrtx']:>11d} {ref['ququart']['cnot_equiv']:>11d} "
            f"{ref['ququart']['sqrtx']:>9d}"
        )
    return "\n".join(lines)
