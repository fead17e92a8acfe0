"""
Joint Tanner graph of two syndrome-coded sources.

Node order is fixed:
    variables: u1[0..n), u2[0..n), z[0..n) (explicit form only)
    checks:    code-1 rows [0..m1), code-2 rows [0..m2), correlation checks [0..n)

Correlation check i enforces u1[i] XOR u2[i] XOR z[i] = 0. In the explicit form
z[i] is a degree-1 variable carrying the constant hidden LLR as its prior. In the
folded form z is eliminated and each correlation check joins u1[i] and u2[i]
only, keeping the hidden LLR as a check parameter.
"""
import logging
from enum import Enum

import numpy as np

from swcoding.codes.ldpc_code import SparseParityMatrix
from swcoding.correlation.correlation_model import CorrelationModel, clamp_llr, hidden_llr
from swcoding.errors import DimensionError

logger = logging.getLogger(__name__)

U1, U2, Z = 0, 1, 2
CODE1, CODE2, CORR = 0, 1, 2

VAR_ROLE_NAMES = ("u1", "u2", "z")
CHECK_ROLE_NAMES = ("code1", "code2", "corr")


class GraphForm(str, Enum):
    EXPLICIT = "explicit"
    FOLDED = "folded"


def _slot_table(groups, size):
    """Edges grouped by node: row g holds the edge ids of node g, padded with -1."""
    order = np.argsort(groups, kind="stable")
    counts = np.bincount(groups, minlength=size)
    width = max(int(counts.max()) if size else 0, 1)
    table = np.full((size, width), -1, dtype=np.int64)
    starts = np.cumsum(counts) - counts
    positions = np.arange(len(order)) - np.repeat(starts, counts)
    table[groups[order], positions] = order
    return table


class JointTannerGraph:
    """
    Immutable graph structure. Decoding sessions keep their own message buffers
    and may share one graph.
    """

    def __init__(self, H1, H2, model, form, hidden, var_role, var_index, check_role, check_index,
                 edge_var, edge_check, priors, check_params):
        self.H1 = H1
        self.H2 = H2
        self.model = model
        self.form = GraphForm(form)
        self.hidden = hidden
        self.n = H1.n
        self.m1 = H1.m
        self.m2 = H2.m
        self.var_role = var_role
        self.var_index = var_index
        self.check_role = check_role
        self.check_index = check_index
        self.edge_var = edge_var
        self.edge_check = edge_check
        self.priors = priors
        self.check_params = check_params
        for array in (var_role, var_index, check_role, check_index, edge_var, edge_check, priors, check_params):
            array.setflags(write=False)
        self.check_slots = _slot_table(edge_check, self.num_checks)
        self.var_slots = _slot_table(edge_var, self.num_vars)
        self.check_slots.setflags(write=False)
        self.var_slots.setflags(write=False)

    @property
    def num_vars(self):
        return len(self.var_role)

    @property
    def num_checks(self):
        return len(self.check_role)

    @property
    def num_edges(self):
        return len(self.edge_var)

    def var_degrees(self):
        return np.bincount(self.edge_var, minlength=self.num_vars)

    def check_degrees(self):
        return np.bincount(self.edge_check, minlength=self.num_checks)

    def folded_correlation_mask(self):
        """Correlation checks whose hidden variable has been folded into the check."""
        if self.form is GraphForm.FOLDED:
            return self.check_role == CORR
        return np.zeros(self.num_checks, dtype=bool)

    def with_hidden_llr(self, llr):
        """Same codes, hidden LLR replaced (0 disables the correlation checks)."""
        return build_joint_graph(self.H1, self.H2, self.model, self.form, hidden=llr)

    def is_cycle_free(self):
        parent = list(range(self.num_vars + self.num_checks))

        def find(node):
            while parent[node] != node:
                parent[node] = parent[parent[node]]
                node = parent[node]
            return node

        for var, check in zip(self.edge_var.tolist(), self.edge_check.tolist()):
            a, b = find(var), find(self.num_vars + check)
            if a == b:
                return False
            parent[a] = b
        return True

    def to_text(self):
        lines = []
        for role, index in zip(self.var_role.tolist(), self.var_index.tolist()):
            line = f"V {VAR_ROLE_NAMES[role]} {index}"
            if role == Z:
                line += f" prior={self.hidden!r}"
            lines.append(line)
        folded = self.form is GraphForm.FOLDED
        for role, index in zip(self.check_role.tolist(), self.check_index.tolist()):
            line = f"C {CHECK_ROLE_NAMES[role]} {index}"
            if role == CORR:
                line += " parity=0"
                if folded:
                    line += f" param={self.hidden!r}"
            lines.append(line)
        pairs = sorted(zip(self.edge_var.tolist(), self.edge_check.tolist()))
        lines.extend(f"E {var} {check}" for var, check in pairs)
        return "\n".join(lines) + "\n"

    def __eq__(self, other):
        if not isinstance(other, JointTannerGraph):
            return NotImplemented
        return (
            self.form is other.form
            and self.hidden == other.hidden
            and self.H1 == other.H1
            and self.H2 == other.H2
            and all(
                np.array_equal(getattr(self, name), getattr(other, name))
                for name in ("var_role", "var_index", "check_role", "check_index",
                             "edge_var", "edge_check", "priors", "check_params")
            )
        )

    __hash__ = None

    def __repr__(self):
        return (f"JointTannerGraph(form={self.form.value}, n={self.n}, m1={self.m1}, m2={self.m2}, "
                f"vars={self.num_vars}, checks={self.num_checks}, edges={self.num_edges})")


def build_joint_graph(H1: SparseParityMatrix, H2: SparseParityMatrix, model: CorrelationModel,
                      form=GraphForm.FOLDED, hidden=None) -> JointTannerGraph:
    """
    hidden overrides the hidden LLR derived from the model; 0 turns the
    correlation checks into information-free constraints.
    """
    if H1.n != H2.n:
        raise DimensionError(f"codes have different lengths: {H1.n} and {H2.n}")
    form = GraphForm(form)
    n, m1, m2 = H1.n, H1.m, H2.m
    llr = hidden_llr(model) if hidden is None else clamp_llr(hidden)
    explicit = form is GraphForm.EXPLICIT
    blocks = 3 if explicit else 2

    var_role = np.repeat(np.arange(blocks, dtype=np.int8), n)
    var_index = np.tile(np.arange(n), blocks)
    check_role = np.concatenate([
        np.full(m1, CODE1, dtype=np.int8),
        np.full(m2, CODE2, dtype=np.int8),
        np.full(n, CORR, dtype=np.int8),
    ])
    check_index = np.concatenate([np.arange(m1), np.arange(m2), np.arange(n)])

    rows1, cols1 = H1.edges()
    rows2, cols2 = H2.edges()
    positions = np.arange(n)
    corr_checks = m1 + m2 + positions
    var_parts = [cols1, n + cols2, positions, n + positions]
    check_parts = [rows1, m1 + rows2, corr_checks, corr_checks]
    if explicit:
        var_parts.append(2 * n + positions)
        check_parts.append(corr_checks)
    edge_var = np.concatenate(var_parts).astype(np.int64)
    edge_check = np.concatenate(check_parts).astype(np.int64)
    order = np.lexsort((edge_var, edge_check))
    edge_var, edge_check = edge_var[order], edge_check[order]

    priors = np.zeros(blocks * n)
    check_params = np.zeros(m1 + m2 + n)
    if explicit:
        priors[2 * n:] = llr
    else:
        check_params[m1 + m2:] = llr

    graph = JointTannerGraph(H1, H2, model, form, llr, var_role, var_index, check_role, check_index,
                             edge_var, edge_check, priors, check_params)
    logger.debug(f"built {graph!r} with hidden LLR {llr}")
    return graph


def fold_hidden(graph: JointTannerGraph) -> JointTannerGraph:
    """Eliminate the degree-1 hidden variables, moving their prior onto the correlation checks."""
    if graph.form is not GraphForm.EXPLICIT:
        raise ValueError(f"fold_hidden needs an explicit-Z graph, got the {graph.form.value} form")
    keep_var = graph.var_role != Z
    keep_edge = keep_var[graph.edge_var]
    edge_var = graph.edge_var[keep_edge].copy()
    edge_check = graph.edge_check[keep_edge].copy()

    check_params = np.zeros(graph.num_checks)
    hidden_edges = ~keep_edge
    check_params[graph.edge_check[hidden_edges]] = graph.priors[graph.edge_var[hidden_edges]]

    return JointTannerGraph(
        graph.H1, graph.H2, graph.model, GraphForm.FOLDED, graph.hidden,
        graph.var_role[keep_var].copy(), graph.var_index[keep_var].copy(),
        graph.check_role.copy(), graph.check_index.copy(),
        edge_var, edge_check, graph.priors[keep_var].copy(), check_params,
    )
