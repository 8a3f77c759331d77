import { DuplicateEntityId, RunnerJob } from "./types";

/**
 * Snippets execute under `exec` with a `_CURRENT_ENTITY` region tag, so an
 * exception is attributed to the entity whose region was active when it was
 * raised, regardless of how many lines the snippet has. Snippet text and
 * entity ids travel as JSON string literals, so any sentinel-looking content
 * round-trips untouched.
 */

const CLAUSE_RE = /^c(\d+)$/;

function clauseKey(id: string): [number, number, string] {
  if (id === "obj") return [2, 0, id];
  const m = CLAUSE_RE.exec(id);
  if (m) return [0, parseInt(m[1], 10), id];
  return [1, 0, id];
}

/** Variables in declaration order, constraints by id, objective last. */
export function entityOrder(job: RunnerJob): Array<[string, string]> {
  const seen = new Set<string>();
  const pairs: Array<[string, string]> = [];
  for (const [id, src] of Object.entries(job.variable_snippets)) {
    if (seen.has(id)) throw new DuplicateEntityId(`entity id used twice: ${id}`);
    seen.add(id);
    pairs.push([id, src]);
  }
  const clauses = Object.entries(job.clause_snippets).sort((a, b) => {
    const [ka, kb] = [clauseKey(a[0]), clauseKey(b[0])];
    for (let i = 0; i < 3; i++) {
      if (ka[i] < kb[i]) return -1;
      if (ka[i] > kb[i]) return 1;
    }
    return 0;
  });
  for (const [id, src] of clauses) {
    if (seen.has(id)) throw new DuplicateEntityId(`entity id used twice: ${id}`);
    seen.add(id);
    pairs.push([id, src]);
  }
  return pairs;
}

/** Embed a JS value as a Python expression via a double-encoded JSON literal. */
function pyLiteral(value: unknown): string {
  return `json.loads(${JSON.stringify(JSON.stringify(value))})`;
}

const PRELUDE = `\
import json
import math
import sys
import traceback

try:
    import resource
    resource.setrlimit(resource.RLIMIT_AS, (_MEMORY_BYTES, _MEMORY_BYTES))
except (ImportError, ValueError):
    pass


def _report(doc):
    doc.setdefault("objective", None)
    doc.setdefault("values", None)
    doc.setdefault("error", None)
    sys.stdout.write(json.dumps(doc) + "\\n")
    sys.stdout.flush()


class _Model:
    def __init__(self):
        self.vars = []
        self.constraints = []
        self.sense = None
        self.objective = None

    def add(self, constraint):
        if not isinstance(constraint, _Constraint):
            raise TypeError("model.add() expects a comparison of expressions")
        self.constraints.append(constraint)

    def minimize(self, expr):
        self.sense = "min"
        self.objective = _wrap(expr)

    def maximize(self, expr):
        self.sense = "max"
        self.objective = _wrap(expr)


model = _Model()


class LinExpr:
    def __init__(self, coeffs=None, const=0.0):
        self.coeffs = dict(coeffs or {})
        self.const = float(const)

    def _combined(self, other, sign):
        other = _wrap(other)
        coeffs = dict(self.coeffs)
        for j, a in other.coeffs.items():
            coeffs[j] = coeffs.get(j, 0.0) + sign * a
        return LinExpr(coeffs, self.const + sign * other.const)

    def __add__(self, other):
        return self._combined(other, 1.0)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combined(other, -1.0)

    def __rsub__(self, other):
        return _wrap(other)._combined(self, -1.0)

    def __neg__(self):
        return LinExpr({j: -a for j, a in self.coeffs.items()}, -self.const)

    def __mul__(self, factor):
        if isinstance(factor, (Var, LinExpr)):
            raise TypeError("nonlinear term: product of two expressions")
        factor = float(factor)
        return LinExpr({j: a * factor for j, a in self.coeffs.items()},
                       self.const * factor)

    __rmul__ = __mul__

    def __le__(self, other):
        return _Constraint(self._combined(other, -1.0), "<=")

    def __ge__(self, other):
        return _Constraint(self._combined(other, -1.0), ">=")

    def __eq__(self, other):
        return _Constraint(self._combined(other, -1.0), "=")

    __hash__ = None


class Var:
    def __init__(self, name, lb=0.0, ub=None, integer=False, binary=False):
        self.name = str(name)
        self.lb = 0.0 if binary else float(lb)
        self.ub = 1.0 if binary else (math.inf if ub is None else float(ub))
        self.integer = bool(integer) or bool(binary)
        self.index = len(model.vars)
        model.vars.append(self)

    def _expr(self):
        return LinExpr({self.index: 1.0})

    def __add__(self, other):
        return self._expr() + other

    __radd__ = __add__

    def __sub__(self, other):
        return self._expr() - other

    def __rsub__(self, other):
        return _wrap(other) - self._expr()

    def __neg__(self):
        return -self._expr()

    def __mul__(self, factor):
        return self._expr() * factor

    __rmul__ = __mul__

    def __le__(self, other):
        return self._expr() <= other

    def __ge__(self, other):
        return self._expr() >= other

    def __eq__(self, other):
        return self._expr() == other

    __hash__ = object.__hash__


class _Constraint:
    def __init__(self, expr, sense):
        self.expr = expr  # expr (sense) 0, constant folded in
        self.sense = sense


def _wrap(value):
    if isinstance(value, LinExpr):
        return value
    if isinstance(value, Var):
        return value._expr()
    return LinExpr({}, float(value))


globals().update(_JOB_DATA["dimensions"])
globals().update(_JOB_DATA["values"])

_CURRENT_ENTITY = ""
try:
    for _entity_id, _source in _SNIPPETS:
        _CURRENT_ENTITY = _entity_id
        exec(compile(_source, "<%s>" % _entity_id, "exec"), globals())
    _CURRENT_ENTITY = ""
except Exception as _exc:  # noqa: BLE001 - everything maps to a result
    _report({
        "status": "error",
        "error": {
            "entity_id": _CURRENT_ENTITY,
            "message": type(_exc).__name__,
            "detail": traceback.format_exc(limit=5)[-1500:],
        },
    })
    sys.exit(0)


def _solve():
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp

    if model.objective is None or model.sense is None:
        return {"status": "error",
                "error": {"entity_id": "", "message": "NoObjective",
                          "detail": "no snippet called model.minimize/maximize"}}
    n = len(model.vars)
    if n == 0:
        return {"status": "optimal", "objective": model.objective.const,
                "values": {}}
    c = np.zeros(n)
    for j, a in model.objective.coeffs.items():
        c[j] = a
    maximize = model.sense == "max"
    constraints = []
    if model.constraints:
        A = np.zeros((len(model.constraints), n))
        lo = np.full(len(model.constraints), -np.inf)
        hi = np.full(len(model.constraints), np.inf)
        for i, con in enumerate(model.constraints):
            for j, a in con.expr.coeffs.items():
                A[i, j] = a
            rhs = -con.expr.const
            if con.sense in ("<=", "="):
                hi[i] = rhs
            if con.sense in (">=", "="):
                lo[i] = rhs
        constraints = [LinearConstraint(A, lo, hi)]
    res = milp(
        c=-c if maximize else c,
        constraints=constraints,
        integrality=np.array([1 if v.integer else 0 for v in model.vars]),
        bounds=Bounds([v.lb for v in model.vars], [v.ub for v in model.vars]),
    )
    if res.status == 2:
        return {"status": "infeasible"}
    if res.status == 3:
        return {"status": "unbounded"}
    if res.status != 0:
        return {"status": "error",
                "error": {"entity_id": "", "message": "SolverStatus",
                          "detail": str(res.message)}}
    objective = (-res.fun if maximize else res.fun) + model.objective.const
    values = {v.name: float(x) for v, x in zip(model.vars, res.x)}
    return {"status": "optimal", "objective": float(objective), "values": values}


try:
    _report(_solve())
except Exception as _exc:  # noqa: BLE001
    _report({
        "status": "error",
        "error": {"entity_id": "", "message": type(_exc).__name__,
                  "detail": traceback.format_exc(limit=5)[-1500:]},
    })
`;

export function assemble(job: RunnerJob): string {
  const pairs = entityOrder(job);
  const header = [
    "import json",
    `_MEMORY_BYTES = ${Math.floor(job.limits.memory_mb)} * 1024 * 1024`,
    `_JOB_DATA = ${pyLiteral(job.data)}`,
    `_SNIPPETS = ${pyLiteral(pairs)}`,
    "",
  ].join("\n");
  return header + PRELUDE;
}
