"""Instance and report documents, region CSV output, instance generation.

Documents are JSON with a fixed key order; floats are serialized with
Python's shortest round-trip repr, so emit(parse(emit(x))) is byte-stable
and equal inputs hash identically.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import numpy as np

from .errors import ParseError
from .markov import MarkovPair
from .product import ProductPair
from .ratios import NPBoundary

#: Accepted drift of an input row sum away from 1 before parsing fails.
ROW_SUM_TOL = 1e-6
#: Row sums closer to 1 than this are taken as already normalized, which
#: keeps parse(emit(...)) byte-stable instead of renormalizing forever.
ROW_SUM_EXACT = 1e-13

KINDS = ("product", "markov")


@dataclass(frozen=True)
class InstanceFile:
    """A parsed problem instance: its kind plus the typed pair."""

    kind: str
    pair: ProductPair | MarkovPair

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def q(self) -> int:
        return self.pair.q


def _normalized_rows(raw, name: str, q: int | None = None) -> np.ndarray:
    try:
        rows = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{name} is not a numeric array: {exc}") from exc
    if rows.ndim == 1:
        rows = rows[None, :]
    if rows.ndim != 2 or rows.shape[1] < 1:
        raise ParseError(f"{name} must be a matrix of rows, got shape {rows.shape}")
    if q is not None and rows.shape[1] != q:
        raise ParseError(f"{name} rows have length {rows.shape[1]}, expected q={q}")
    if not np.all(np.isfinite(rows)) or np.any(rows < 0):
        raise ParseError(f"{name} entries must be finite and nonnegative")
    sums = np.sum(rows, axis=1)
    off = np.abs(sums - 1.0)
    if np.any(off > ROW_SUM_TOL):
        worst = int(np.argmax(off))
        raise ParseError(f"{name} row {worst} sums to {sums[worst]!r}, off by more than {ROW_SUM_TOL}")
    fix = off > ROW_SUM_EXACT
    if np.any(fix):
        rows = rows.copy()
        rows[fix] /= sums[fix, None]
    return rows


def _require(doc: dict, key: str):
    if key not in doc:
        raise ParseError(f"missing field {key!r}")
    return doc[key]


def parse_instance(text: str) -> InstanceFile:
    """Parse an instance document, validating shapes and row sums."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    kind = _require(doc, "kind")
    if kind not in KINDS:
        raise ParseError(f"unknown kind {kind!r}, expected one of {KINDS}")
    n = _require(doc, "n")
    q = _require(doc, "q")
    if not (isinstance(n, int) and isinstance(q, int) and n >= 1 and q >= 1):
        raise ParseError(f"n and q must be positive integers, got n={n!r}, q={q!r}")
    if kind == "product":
        p = _normalized_rows(_require(doc, "p"), "p", q)
        qd = _normalized_rows(_require(doc, "q_dist"), "q_dist", q)
        if p.shape[0] != n or qd.shape[0] != n:
            raise ParseError(f"expected {n} marginal rows, got {p.shape[0]} and {qd.shape[0]}")
        return InstanceFile(kind, ProductPair(p, qd))
    p_init = _normalized_rows(_require(doc, "p_init"), "p_init", q)[0]
    q_init = _normalized_rows(_require(doc, "q_init"), "q_init", q)[0]
    pk_raw = _require(doc, "p_kernels")
    qk_raw = _require(doc, "q_kernels")
    if not isinstance(pk_raw, list) or not isinstance(qk_raw, list):
        raise ParseError("p_kernels and q_kernels must be lists of matrices")
    if len(pk_raw) != n - 1 or len(qk_raw) != n - 1:
        raise ParseError(f"expected {n - 1} kernels, got {len(pk_raw)} and {len(qk_raw)}")
    pk = np.stack(
        [_normalized_rows(k, f"p_kernels[{i}]", q) for i, k in enumerate(pk_raw)]
    ) if n > 1 else np.zeros((0, q, q))
    qk = np.stack(
        [_normalized_rows(k, f"q_kernels[{i}]", q) for i, k in enumerate(qk_raw)]
    ) if n > 1 else np.zeros((0, q, q))
    if n > 1 and (pk.shape[2] != q or qk.shape[2] != q):
        raise ParseError("kernels must be q-by-q matrices")
    return InstanceFile(kind, MarkovPair(p_init, q_init, pk, qk))


def emit_instance(inst: InstanceFile) -> str:
    """Canonical text form of an instance: fixed key order, repr floats."""
    if inst.kind == "product":
        pair = inst.pair
        doc = {
            "kind": "product",
            "n": inst.n,
            "q": inst.q,
            "p": pair.p_marginals.tolist(),
            "q_dist": pair.q_marginals.tolist(),
        }
    else:
        pair = inst.pair
        doc = {
            "kind": "markov",
            "n": inst.n,
            "q": inst.q,
            "p_init": pair.p_init.tolist(),
            "q_init": pair.q_init.tolist(),
            "p_kernels": pair.p_kernels.tolist(),
            "q_kernels": pair.q_kernels.tolist(),
        }
    return json.dumps(doc, indent=1) + "\n"


def instance_digest(inst: InstanceFile) -> str:
    """SHA-256 of the canonical document, prefixed with the algorithm name."""
    payload = emit_instance(inst).encode("utf-8")
    return "sha256:" + hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True)
class ReportFile:
    """Result document for one estimation run."""

    mode: str
    estimate: float
    epsilon: float | None
    d_lb: float
    max_support: int
    elapsed_ms: float
    instance_digest: str


def emit_report(report: ReportFile) -> str:
    doc = {"mode": report.mode, "estimate": report.estimate}
    if report.epsilon is not None:
        doc["epsilon"] = report.epsilon
    doc.update(
        {
            "d_lb": report.d_lb,
            "max_support": report.max_support,
            "elapsed_ms": report.elapsed_ms,
            "instance_digest": report.instance_digest,
        }
    )
    return json.dumps(doc, indent=1) + "\n"


def parse_report(text: str) -> ReportFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    try:
        return ReportFile(
            mode=doc["mode"],
            estimate=doc["estimate"],
            epsilon=doc.get("epsilon"),
            d_lb=doc["d_lb"],
            max_support=doc["max_support"],
            elapsed_ms=doc["elapsed_ms"],
            instance_digest=doc["instance_digest"],
        )
    except KeyError as exc:
        raise ParseError(f"missing field {exc.args[0]!r}") from exc


def region_csv(boundary: NPBoundary) -> str:
    """Region boundary vertices as 'x,y' lines (the boundary is piecewise linear)."""
    lines = ["x,y"]
    for x, y in boundary.vertices:
        lines.append(f"{float(x)!r},{float(y)!r}")
    return "\n".join(lines) + "\n"


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed) % 2**64)


def _random_rows(rng: np.random.Generator, shape: tuple[int, ...], skew: float) -> np.ndarray:
    draws = rng.gamma(shape=skew, scale=1.0, size=shape)
    return draws / np.sum(draws, axis=-1, keepdims=True)


def generate_product_instance(n: int, q: int, seed: int, skew: float = 1.0) -> InstanceFile:
    """Seeded random product instance; identical arguments give identical files.

    Each marginal is an independent normalized vector of gamma draws with the
    given shape, so small skews give spiky marginals and large skews give
    near-uniform ones.
    """
    rng = _rng(seed)
    p = _random_rows(rng, (n, q), skew)
    qd = _random_rows(rng, (n, q), skew)
    return InstanceFile("product", ProductPair(p, qd))


def generate_markov_instance(n: int, q: int, seed: int, skew: float = 1.0) -> InstanceFile:
    """Seeded random chain instance; same determinism contract as products."""
    rng = _rng(seed)
    p_init = _random_rows(rng, (q,), skew)
    q_init = _random_rows(rng, (q,), skew)
    pk = _random_rows(rng, (n - 1, q, q), skew) if n > 1 else np.zeros((0, q, q))
    qk = _random_rows(rng, (n - 1, q, q), skew) if n > 1 else np.zeros((0, q, q))
    return InstanceFile("markov", MarkovPair(p_init, q_init, pk, qk))


def generate_instance(kind: str, n: int, q: int, seed: int, skew: float = 1.0) -> InstanceFile:
    if kind == "product":
        return generate_product_instance(n, q, seed, skew)
    if kind == "markov":
        return generate_markov_instance(n, q, seed, skew)
    raise ParseError(f"unknown kind {kind!r}, expected one of {KINDS}")


def derive_seed(seed: int, n: int, q: int) -> int:
    """Per-grid-point sub-seed used by the benchmark harness."""
    seq = np.random.SeedSequence([int(seed) % 2**64, int(n), int(q)])
    return int(seq.generate_state(1, np.uint64)[0])
