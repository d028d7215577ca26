"""DIMACS CNF emission and parsing.

Emitted files are self-describing: comments record the instance shape and
the variable-numbering convention, then the standard `p cnf` header and
one zero-terminated clause per line.  Emission is deterministic, so equal
formulas produce byte-identical files.
"""

from __future__ import annotations

from .encode import Clause, CnfFormula


def to_dimacs(formula: CnfFormula) -> str:
    lines = []
    for comment in formula.comments:
        lines.append(f"c {comment}")
    lines.append(
        "c varmap: var(i,j,c) = t*(j*(j-1)/2 + i) + c + 1 for 0<=i<j<V, "
        "colors red-first; auxiliaries above"
    )
    for group in formula.groups:
        lines.append(f"c group {group.tag}: {len(group.clauses)} clauses")
    lines.append(f"p cnf {formula.num_vars} {formula.num_clauses}")
    for clause in formula.clauses():
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[Clause]]:
    """Parse a DIMACS file into (variable count, clause list)."""
    num_vars: int | None = None
    num_clauses: int | None = None
    clauses: list[Clause] = []
    pending: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"bad problem line {line!r}")
            num_vars, num_clauses = int(parts[2]), int(parts[3])
            continue
        if num_vars is None:
            raise ValueError("clause before problem line")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(pending))
                pending.clear()
            else:
                if abs(lit) > num_vars:
                    raise ValueError(f"literal {lit} above declared {num_vars} vars")
                pending.append(lit)
    if pending:
        raise ValueError("dangling clause without terminating 0")
    if num_vars is None:
        raise ValueError("missing problem line")
    if num_clauses is not None and len(clauses) != num_clauses:
        raise ValueError(
            f"header declares {num_clauses} clauses, file has {len(clauses)}"
        )
    return num_vars, clauses
