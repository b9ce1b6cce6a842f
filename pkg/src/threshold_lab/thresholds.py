"""Expected subgraph counts and the expectation thresholds p_E, p_E* and q-sparseness."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .canon import aut_count, canonical_form
from .counting import DEFAULT_CENSUS_EDGES, Census, CensusEntry, subgraph_census
from .errors import HostTooSmall, ThresholdLabError
from .graph6 import write_graph6
from .graphs import Graph
from .numeric import Real, falling_factorial

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ExpectedCount:
    """E_p X_J = (n)_v p^e / aut(J)."""

    n: int
    falling_factorial: int
    edge_exponent: int
    aut: int
    p: Real

    @property
    def value(self) -> Real:
        return Real.exact(Fraction(self.falling_factorial, self.aut)) * self.p ** self.edge_exponent

    def __float__(self):
        return float(self.value)


def expected_count(j: Graph, n: int, p, aut: int | None = None) -> ExpectedCount:
    if n < j.n:
        raise HostTooSmall(n, j.n)
    return ExpectedCount(n, falling_factorial(n, j.n), j.e, aut if aut is not None else aut_count(j), Real.coerce(p))


class Threshold(NamedTuple):
    p: Real
    binding: CensusEntry


def _check(h: Graph, n: int):
    if n < h.n:
        raise HostTooSmall(n, h.n)
    if h.e == 0:
        raise ThresholdLabError("thresholds need a graph with at least one edge")


def class_threshold(entry: CensusEntry, n: int, rhs) -> Real:
    """The p solving (n)_v p^e / aut = rhs for one census class."""
    return Real.radical(Fraction(rhs) * entry.aut / falling_factorial(n, entry.v), entry.e)


def _max_threshold(census: Census, n: int, rhs_of) -> Threshold:
    best = None
    for entry in census:
        p = class_threshold(entry, n, rhs_of(entry))
        if best is None:
            best = (p, entry)
            continue
        c = p.compare(best[0])
        if c > 0 or (c == 0 and entry.code < best[1].code):
            best = (p, entry)
    return Threshold(*best)


def threshold_constraints(h: Graph, n: int, theta=HALF, fractional=False, census: Census | None = None):
    """Per-class (entry, p_I) pairs behind p_E (or p_E* when ``fractional``)."""
    _check(h, n)
    census = census or subgraph_census(h)
    theta = Fraction(theta)
    return [(x, class_threshold(x, n, theta * (x.copies if fractional else 1))) for x in census]


def p_expectation_threshold(h: Graph, n: int, theta=HALF, census: Census | None = None,
                            max_edges: int = DEFAULT_CENSUS_EDGES) -> Threshold:
    """p_E: least p with E_p X_I >= theta for every subgraph I of h."""
    _check(h, n)
    census = census or subgraph_census(h, max_edges)
    theta = Fraction(theta)
    return _max_threshold(census, n, lambda x: theta)


def p_fractional_expectation_threshold(h: Graph, n: int, theta=HALF, census: Census | None = None,
                                       max_edges: int = DEFAULT_CENSUS_EDGES) -> Threshold:
    """p_E*: least p with E_p X_I >= theta * N(h, I) for every subgraph I of h."""
    _check(h, n)
    census = census or subgraph_census(h, max_edges)
    theta = Fraction(theta)
    return _max_threshold(census, n, lambda x: theta * x.copies)


def is_q_sparse(h: Graph, n: int, q, theta=1, census: Census | None = None,
                max_edges: int = DEFAULT_CENSUS_EDGES):
    """``(True, None)`` if E_q X_I >= theta for every subgraph I, else ``(False, witness)``.

    The witness is the violating census class with the smallest expected count.
    """
    if n < h.n:
        raise HostTooSmall(n, h.n)
    q = Real.coerce(q)
    theta = Fraction(theta)
    if h.e == 0:
        return True, None
    census = census or subgraph_census(h, max_edges)
    worst = None
    for x in census:
        val = expected_count(x.graph, n, q, aut=x.aut).value
        if val.compare(theta) < 0 and (worst is None or val < worst[0]):
            worst = (val, x)
    return (worst is None), (worst[1] if worst else None)


@dataclass
class ThresholdReport:
    graph: Graph
    n: int
    theta: Fraction
    p_e: Real
    p_e_star: Real
    binding_e: CensusEntry
    binding_star: CensusEntry
    p_c: object = None  # PcEstimate when requested

    @property
    def ratio(self) -> Real:
        return self.p_e_star / self.p_e

    def to_json(self) -> dict:
        out = {
            "graph": write_graph6(self.graph),
            "n": self.n,
            "theta": str(self.theta),
            "p_e": self.p_e.to_json(),
            "p_e_star": self.p_e_star.to_json(),
            "binding_e": self.binding_e.code.decode(),
            "binding_star": self.binding_star.code.decode(),
            "ratio": self.ratio.to_json(),
        }
        if self.p_c is not None:
            out["p_c"] = self.p_c.to_json()
        return out


def threshold_report(h: Graph, n: int, theta=HALF, census=None, max_edges=DEFAULT_CENSUS_EDGES) -> ThresholdReport:
    census = census or subgraph_census(h, max_edges)
    pe = p_expectation_threshold(h, n, theta, census)
    ps = p_fractional_expectation_threshold(h, n, theta, census)
    return ThresholdReport(h, n, Fraction(theta), pe.p, ps.p, pe.binding, ps.binding)


@dataclass
class ScanRow:
    graph: Graph
    report: ThresholdReport | None = None
    error: str | None = None

    @property
    def ratio(self):
        return None if self.report is None else self.report.ratio


@dataclass
class ScanTable:
    n: int
    rows: list = field(default_factory=list)

    @property
    def max_ratio(self):
        ratios = [r.ratio for r in self.rows if r.report is not None]
        if not ratios:
            return None
        best = ratios[0]
        for r in ratios[1:]:
            if r > best:
                best = r
        return best

    def to_csv_rows(self):
        yield ["graph6", "n", "v", "e", "p_e", "p_e_star", "ratio", "log2_p_e", "log2_p_e_star", "binding_e",
               "binding_star", "error"]
        for r in self.rows:
            g6 = write_graph6(r.graph)
            if r.report is None:
                yield [g6, self.n, r.graph.n, r.graph.e, "", "", "", "", "", "", "", r.error]
                continue
            rep = r.report
            yield [g6, self.n, r.graph.n, r.graph.e, f"{float(rep.p_e):.12g}", f"{float(rep.p_e_star):.12g}",
                   f"{float(rep.ratio):.12g}", f"{rep.p_e.log2:.12g}", f"{rep.p_e_star.log2:.12g}",
                   rep.binding_e.code.decode(), rep.binding_star.code.decode(), ""]


def ratio_scan(family, n: int, theta=HALF, max_edges: int = DEFAULT_CENSUS_EDGES) -> ScanTable:
    """p_E, p_E* and their ratio for each graph; per-graph failures are recorded, not raised."""
    family = list(family)
    if not family:
        raise ValueError("family is empty")
    table = ScanTable(n)
    for g in family:
        try:
            table.rows.append(ScanRow(g, threshold_report(g, n, theta, max_edges=max_edges)))
        except ThresholdLabError as exc:
            table.rows.append(ScanRow(g, error=f"{type(exc).__name__}: {exc}"))
    return table


def code_of(g: Graph) -> str:
    return canonical_form(g).decode()
