"""Binary CART: Gini-driven growing, prediction, and serialization.

Splits are binary.  Numeric features are cut at midpoints between
consecutive distinct values (left means value <= threshold); categorical
features are cut by code subsets (left means code in subset), with every
nontrivial bipartition of the codes present at the node enumerated.
Candidates are ranked by impurity decrease with a deterministic
tie-break: lowest feature index first, then lowest threshold, then
lexicographically smallest sorted code subset.

Classification impurity is Gini, 1 - sum(p_i^2); regression mode uses
the population variance of the target instead and predicts leaf means.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dataset import (
    CATEGORICAL,
    NUMERIC,
    ClassDistribution,
    Dataset,
    Schema,
)
from .errors import (
    ConfigError,
    EmptyDatasetError,
    MalformedDocumentError,
    SchemaMismatchError,
    VersionMismatchError,
)

FORMAT_VERSION = "cart-model/1"

CLASSIFICATION = "classification"
REGRESSION = "regression"


class UnseenCategoryWarning(UserWarning):
    """Prediction met a categorical code absent from training."""


def gini(dist: ClassDistribution) -> float:
    """Gini impurity 1 - sum of squared class proportions."""
    total = float(dist.total)
    acc = 1.0
    for c in dist.counts:
        p = c / total
        acc -= p * p
    return acc


def split_gini(left: ClassDistribution, right: ClassDistribution) -> float:
    """Size-weighted Gini of a two-way partition."""
    n = left.total + right.total
    return (left.total * gini(left) + right.total * gini(right)) / n


@dataclass(frozen=True)
class SplitRule:
    """Routing test at an internal node.

    Exactly one of threshold (numeric: left iff value <= threshold) and
    subset (categorical: left iff code in subset) is set.  complement
    holds the training codes routed right, so prediction can tell a
    genuinely unseen code from one that belongs right.
    """

    feature: str
    feature_index: int
    threshold: float | None = None
    subset: frozenset[int] | None = None
    complement: frozenset[int] | None = None

    def __post_init__(self):
        if (self.threshold is None) == (self.subset is None):
            raise ValueError("rule needs exactly one of threshold/subset")
        if self.subset is not None:
            if not self.subset or self.complement is None or not self.complement:
                raise ValueError("categorical rule needs nonempty sides")
            if self.subset & self.complement:
                raise ValueError("subset and complement overlap")

    @property
    def is_numeric(self) -> bool:
        return self.threshold is not None

    def goes_left(self, value) -> bool:
        if self.is_numeric:
            return float(value) <= self.threshold
        return int(value) in self.subset

    def describe(self) -> str:
        if self.is_numeric:
            return f"{self.feature} <= {self.threshold!r}"
        codes = ", ".join(str(c) for c in sorted(self.subset))
        return f"{self.feature} in {{{codes}}}"


@dataclass
class TreeNode:
    """Internal node (rule plus two children) or leaf (prediction)."""

    n: int
    counts: tuple[int, int] | None = None
    rule: SplitRule | None = None
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    predicted_class: int | None = None
    positive_proportion: float | None = None
    mean: float | None = None

    @property
    def is_leaf(self) -> bool:
        return self.rule is None

    def walk(self):
        """Preorder traversal."""
        yield self
        if not self.is_leaf:
            yield from self.left.walk()
            yield from self.right.walk()


@dataclass(frozen=True)
class CartConfig:
    """Growing limits.

    min_node_size in [1, 5] unless allow_large_min_node is set; a node
    with fewer rows is never split.  max_depth bounds the root-to-leaf
    rule count.  A split is kept only when its impurity decrease is at
    least min_gini_decrease.
    """

    min_node_size: int = 5
    max_depth: int = 10
    min_gini_decrease: float = 0.0
    mode: str = CLASSIFICATION
    allow_large_min_node: bool = False

    def __post_init__(self):
        if self.min_node_size < 1:
            raise ConfigError("min_node_size must be at least 1")
        if self.min_node_size > 5 and not self.allow_large_min_node:
            raise ConfigError(
                f"min_node_size {self.min_node_size} exceeds 5; "
                "pass the large-min-node override to allow it")
        if self.max_depth < 0:
            raise ConfigError("max_depth cannot be negative")
        if self.min_gini_decrease < 0:
            raise ConfigError("min_gini_decrease cannot be negative")
        if self.mode not in (CLASSIFICATION, REGRESSION):
            raise ConfigError(f"unknown mode {self.mode!r}")


@dataclass
class CartTree:
    """Grown tree plus everything needed to apply or rebuild it."""

    root: TreeNode
    fingerprint: tuple
    config: CartConfig
    n_training_rows: int

    def node_count(self) -> int:
        return sum(1 for _ in self.root.walk())

    def depth(self) -> int:
        def d(node):
            return 0 if node.is_leaf else 1 + max(d(node.left), d(node.right))
        return d(self.root)

    def predict(self, row) -> tuple[int, float]:
        """Route one feature row; returns (class, positive proportion)."""
        if self.config.mode != CLASSIFICATION:
            raise ValueError("predict() needs a classification tree")
        leaf = self._route(row)
        return leaf.predicted_class, leaf.positive_proportion

    def predict_value(self, row) -> float:
        """Regression counterpart of predict: the leaf mean."""
        if self.config.mode != REGRESSION:
            raise ValueError("predict_value() needs a regression tree")
        return self._route(row).mean

    def _route(self, row) -> TreeNode:
        expected = len(self.fingerprint) - 1
        if len(row) != expected:
            raise SchemaMismatchError(
                f"row has {len(row)} values, tree expects {expected}")
        node = self.root
        while not node.is_leaf:
            rule = node.rule
            value = row[rule.feature_index]
            if not rule.is_numeric:
                code = int(value)
                if code not in rule.subset and code not in rule.complement:
                    warnings.warn(
                        f"code {code} of {rule.feature!r} never seen in "
                        "training; routing right", UnseenCategoryWarning)
            node = node.left if rule.goes_left(value) else node.right
        return node


def assign_leaf(counts: tuple[int, int]) -> tuple[int, float]:
    """Majority class and positive proportion; ties go to class 0."""
    n = counts[0] + counts[1]
    predicted = 1 if counts[1] > counts[0] else 0
    return predicted, counts[1] / n


# -- split search ----------------------------------------------------------
#
# The candidate scoring below is written so that an independent
# brute-force enumeration using the same arithmetic (p = c/n as plain
# division, impurity = 1 - p*p - q*q, weighted = (nl*gl + nr*gr)/n,
# decrease = parent - weighted) reproduces the chosen decrease bit for
# bit.  Keep products spelled as multiplication, not **.


def _gini_counts(c1: float, c0: float, n: float) -> float:
    p1 = c1 / n
    p0 = c0 / n
    return 1.0 - p1 * p1 - p0 * p0


@dataclass
class _Candidate:
    decrease: float
    feature: str
    feature_index: int
    threshold: float | None = None
    subset: tuple[int, ...] | None = None
    complement: tuple[int, ...] | None = None


def _numeric_candidate(values, y1, parent_impurity, mode):
    """Best cut of one numeric column; y1 is the 0/1 class indicator
    for classification or the raw target for regression."""
    order = np.argsort(values, kind="mergesort")
    sv = values[order]
    sy = y1[order]
    bounds = np.nonzero(sv[1:] > sv[:-1])[0]
    if bounds.size == 0:
        return None
    n = sv.shape[0]
    nl = (bounds + 1).astype(float)
    nr = n - nl
    if mode == CLASSIFICATION:
        ones = np.cumsum(sy)
        cl1 = ones[bounds].astype(float)
        cl0 = nl - cl1
        c1 = float(ones[-1])
        c0 = n - c1
        cr1 = c1 - cl1
        cr0 = c0 - cl0
        pl1 = cl1 / nl
        pl0 = cl0 / nl
        gl = 1.0 - pl1 * pl1 - pl0 * pl0
        pr1 = cr1 / nr
        pr0 = cr0 / nr
        gr = 1.0 - pr1 * pr1 - pr0 * pr0
    else:
        s = np.cumsum(sy)
        s2 = np.cumsum(sy * sy)
        ml = s[bounds] / nl
        gl = s2[bounds] / nl - ml * ml
        mr = (s[-1] - s[bounds]) / nr
        gr = (s2[-1] - s2[bounds]) / nr - mr * mr
    weighted = (nl * gl + nr * gr) / n
    decrease = parent_impurity - weighted
    best = int(np.argmax(decrease))
    b = bounds[best]
    threshold = (sv[b] + sv[b + 1]) / 2.0
    return float(decrease[best]), float(threshold)


def _categorical_candidate(values, y1, parent_impurity, mode):
    """Best code-subset cut of one categorical column.

    Enumerates every bipartition of the codes present, canonicalised so
    the left subset always contains the smallest code; ties prefer the
    lexicographically smallest sorted subset.
    """
    codes = np.unique(values)
    m = codes.shape[0]
    if m < 2:
        return None
    n = float(values.shape[0])
    if mode == CLASSIFICATION:
        per_c1 = np.array([float(np.sum(y1[values == c])) for c in codes])
        per_n = np.array([float(np.sum(values == c)) for c in codes])
        per_c0 = per_n - per_c1
        total1 = float(per_c1.sum())
        total0 = float(per_c0.sum())
    else:
        per_n = np.array([float(np.sum(values == c)) for c in codes])
        per_s = np.array([float(np.sum(y1[values == c])) for c in codes])
        per_s2 = np.array(
            [float(np.sum(y1[values == c] * y1[values == c])) for c in codes])

    code_ints = [int(c) for c in codes]
    best = None
    for mask in range(1, (1 << m) - 1, 2):
        members = [i for i in range(m) if mask >> i & 1]
        nl = float(sum(per_n[i] for i in members))
        nr = n - nl
        if nl < 1 or nr < 1:
            continue
        if mode == CLASSIFICATION:
            cl1 = float(sum(per_c1[i] for i in members))
            cl0 = nl - cl1
            gl = _gini_counts(cl1, cl0, nl)
            gr = _gini_counts(total1 - cl1, total0 - cl0, nr)
        else:
            sl = float(sum(per_s[i] for i in members))
            sl2 = float(sum(per_s2[i] for i in members))
            ml = sl / nl
            gl = sl2 / nl - ml * ml
            mr = (per_s.sum() - sl) / nr
            gr = (per_s2.sum() - sl2) / nr - mr * mr
        weighted = (nl * gl + nr * gr) / n
        decrease = parent_impurity - weighted
        subset = tuple(code_ints[i] for i in members)
        if (best is None or decrease > best[0]
                or (decrease == best[0] and subset < best[1])):
            best = (decrease, subset)
    if best is None:
        return None
    decrease, subset = best
    complement = tuple(c for c in code_ints if c not in subset)
    return float(decrease), subset, complement


def _search_split(columns, specs, y, parent_impurity, mode):
    """Best candidate over the given features, applying the tie-break
    ordering; columns maps feature name -> value vector at this node."""
    best: _Candidate | None = None
    for spec in sorted(specs, key=lambda s: s.index):
        values = columns[spec.name]
        if spec.kind == NUMERIC:
            found = _numeric_candidate(values, y, parent_impurity, mode)
            if found is None:
                continue
            decrease, threshold = found
            cand = _Candidate(decrease, spec.name, spec.index,
                              threshold=threshold)
        else:
            found = _categorical_candidate(values, y, parent_impurity, mode)
            if found is None:
                continue
            decrease, subset, complement = found
            cand = _Candidate(decrease, spec.name, spec.index,
                              subset=subset, complement=complement)
        if best is None or cand.decrease > best.decrease:
            best = cand
    return best


def best_split(
    data: Dataset,
    variables: list[str] | None = None,
    config: CartConfig = CartConfig(),
    indices=None,
) -> tuple[SplitRule, float] | None:
    """Best admissible rule for the given rows, or None.

    None means no candidate exists (too few rows, pure node, constant
    columns) or the best decrease falls short of min_gini_decrease.
    """
    names = list(variables) if variables is not None else data.schema.names
    specs = [data.schema[n] for n in names]
    idx = np.arange(data.n) if indices is None else np.asarray(indices)
    if idx.shape[0] < 2:
        return None
    if config.mode == CLASSIFICATION:
        y = data.binary_target()[idx].astype(float)
        c1 = float(y.sum())
        c0 = float(y.shape[0]) - c1
        if c1 == 0.0 or c0 == 0.0:
            return None
        parent = _gini_counts(c1, c0, float(y.shape[0]))
    else:
        y = data.target_array()[idx]
        mean = y.sum() / y.shape[0]
        parent = float((y * y).sum() / y.shape[0] - mean * mean)
        if parent <= 0.0:
            return None
    columns = {s.name: data.feature_array([s.name])[idx, 0] for s in specs}
    cand = _search_split(columns, specs, y, parent, config.mode)
    if cand is None or cand.decrease < config.min_gini_decrease:
        return None
    return _candidate_rule(cand), cand.decrease


def _candidate_rule(cand: _Candidate) -> SplitRule:
    if cand.threshold is not None:
        return SplitRule(cand.feature, cand.feature_index,
                         threshold=cand.threshold)
    return SplitRule(cand.feature, cand.feature_index,
                     subset=frozenset(cand.subset),
                     complement=frozenset(cand.complement))


def grow(
    data: Dataset,
    variables: list[str] | None = None,
    config: CartConfig = CartConfig(),
) -> CartTree:
    """Grow a tree by recursive partitioning.

    A node becomes a leaf when it is homogeneous, no admissible split
    remains, it holds fewer than min_node_size rows, or it sits at
    max_depth.
    """
    if data.n == 0:
        raise EmptyDatasetError("cannot grow a tree on 0 rows")
    names = list(variables) if variables is not None else data.schema.names
    specs = [data.schema[n] for n in names]
    classification = config.mode == CLASSIFICATION
    y = (data.binary_target().astype(float) if classification
         else data.target_array())
    full_columns = {s.name: data.feature_array([s.name])[:, 0] for s in specs}

    def leaf(idx) -> TreeNode:
        sub = y[idx]
        if classification:
            c1 = int(sub.sum())
            counts = (idx.shape[0] - c1, c1)
            predicted, p1 = assign_leaf(counts)
            return TreeNode(n=idx.shape[0], counts=counts,
                            predicted_class=predicted,
                            positive_proportion=p1)
        return TreeNode(n=idx.shape[0], mean=float(sub.mean()))

    def build(idx, depth) -> TreeNode:
        sub = y[idx]
        n = idx.shape[0]
        if classification:
            c1 = float(sub.sum())
            c0 = float(n) - c1
            counts = (int(c0), int(c1))
            homogeneous = c1 == 0.0 or c0 == 0.0
            parent = None if homogeneous else _gini_counts(c1, c0, float(n))
        else:
            counts = None
            mean = sub.sum() / n
            parent = float((sub * sub).sum() / n - mean * mean)
            homogeneous = parent <= 0.0
        if homogeneous or n < config.min_node_size or depth >= config.max_depth:
            return leaf(idx)
        columns = {name: col[idx] for name, col in full_columns.items()}
        cand = _search_split(columns, specs, sub, parent, config.mode)
        if cand is None or cand.decrease < config.min_gini_decrease:
            return leaf(idx)
        rule = _candidate_rule(cand)
        values = columns[cand.feature]
        if rule.is_numeric:
            mask = values <= rule.threshold
        else:
            mask = np.isin(values.astype(int), sorted(rule.subset))
        # A midpoint that rounds onto its upper boundary value would
        # sweep every row to one side; refuse rather than recurse.
        if not 0 < int(mask.sum()) < n:
            return leaf(idx)
        node = TreeNode(n=n, counts=counts, rule=rule,
                        left=build(idx[mask], depth + 1),
                        right=build(idx[~mask], depth + 1))
        return node

    root = build(np.arange(data.n), 0)
    return CartTree(root=root, fingerprint=data.schema.fingerprint(),
                    config=config, n_training_rows=data.n)


def predict_dataset(tree: CartTree, data: Dataset):
    """Apply the tree to every row; returns (classes, scores) arrays.

    Scores are leaf positive proportions.  The dataset schema must
    match the training schema exactly.
    """
    if data.schema.fingerprint() != tree.fingerprint:
        raise SchemaMismatchError(
            "dataset schema differs from the tree's training schema")
    classes = np.empty(data.n, dtype=int)
    scores = np.empty(data.n, dtype=float)
    for i, row in enumerate(data.rows):
        cls, score = tree.predict(row[:-1])
        classes[i] = cls
        scores[i] = score
    return classes, scores


# -- serialization ---------------------------------------------------------


def _emit_json(value, parts: list[str]) -> None:
    """Minimal JSON writer printing floats at 17 significant digits."""
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, str):
        parts.append(json.dumps(value))
    elif isinstance(value, (int, np.integer)):
        parts.append(str(int(value)))
    elif isinstance(value, float):
        parts.append(format(value, ".17g"))
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, item in enumerate(value):
            if i:
                parts.append(", ")
            _emit_json(item, parts)
        parts.append("]")
    elif isinstance(value, dict):
        parts.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                parts.append(", ")
            parts.append(json.dumps(key) + ": ")
            _emit_json(item, parts)
        parts.append("}")
    else:
        raise TypeError(f"cannot serialize {type(value)!r}")


def dumps_document(doc: dict) -> str:
    parts: list[str] = []
    _emit_json(doc, parts)
    return "".join(parts) + "\n"


def serialize(tree: CartTree) -> str:
    """Tree as a one-document JSON string, preorder node records."""
    nodes = list(tree.root.walk())
    index = {id(node): i for i, node in enumerate(nodes)}
    records = []
    for node in nodes:
        rec = {
            "n": node.n,
            "counts": list(node.counts) if node.counts is not None else None,
            "left": index[id(node.left)] if node.left is not None else None,
            "right": index[id(node.right)] if node.right is not None else None,
        }
        if node.rule is not None:
            rec["feature"] = node.rule.feature
            rec["feature_index"] = node.rule.feature_index
            rec["threshold"] = node.rule.threshold
            rec["subset"] = (sorted(node.rule.subset)
                             if node.rule.subset is not None else None)
            rec["complement"] = (sorted(node.rule.complement)
                                 if node.rule.complement is not None else None)
        else:
            rec["class"] = node.predicted_class
            rec["p1"] = node.positive_proportion
            rec["mean"] = node.mean
        records.append(rec)
    doc = {
        "format": FORMAT_VERSION,
        "config": {
            "min_node_size": tree.config.min_node_size,
            "max_depth": tree.config.max_depth,
            "min_gini_decrease": tree.config.min_gini_decrease,
            "mode": tree.config.mode,
        },
        "schema": _fingerprint_to_doc(tree.fingerprint),
        "n_training_rows": tree.n_training_rows,
        "nodes": records,
    }
    return dumps_document(doc)


def _fingerprint_to_doc(fp: tuple) -> dict:
    return {
        "features": [
            {"name": name, "kind": kind, "levels": levels}
            for name, kind, levels in fp[:-1]
        ],
        "target": fp[-1],
    }


def _fingerprint_from_doc(doc) -> tuple:
    try:
        features = tuple(
            (f["name"], f["kind"], f["levels"]) for f in doc["features"])
        return features + (doc["target"],)
    except (KeyError, TypeError) as exc:
        raise MalformedDocumentError(f"bad schema section: {exc}") from None


def deserialize(text: str) -> CartTree:
    """Rebuild a tree from serialize() output.

    Raises VersionMismatchError for a foreign format tag and
    MalformedDocumentError for anything structurally wrong, naming the
    offending node index where one exists.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocumentError(
            f"not valid JSON at position {exc.pos}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise MalformedDocumentError("document root must be an object")
    version = doc.get("format")
    if version is None:
        raise MalformedDocumentError("missing format field")
    if version != FORMAT_VERSION:
        raise VersionMismatchError(
            f"expected {FORMAT_VERSION!r}, found {version!r}")
    for key in ("config", "schema", "n_training_rows", "nodes"):
        if key not in doc:
            raise MalformedDocumentError(f"missing {key} field")
    cfg = doc["config"]
    try:
        config = CartConfig(
            min_node_size=int(cfg["min_node_size"]),
            max_depth=int(cfg["max_depth"]),
            min_gini_decrease=float(cfg["min_gini_decrease"]),
            mode=cfg["mode"],
            allow_large_min_node=True,
        )
    except (KeyError, TypeError, ValueError, ConfigError) as exc:
        raise MalformedDocumentError(f"bad config section: {exc}") from None
    fingerprint = _fingerprint_from_doc(doc["schema"])
    records = doc["nodes"]
    if not isinstance(records, list) or not records:
        raise MalformedDocumentError("nodes must be a nonempty list")

    nodes = [_record_to_node(rec, i) for i, rec in enumerate(records)]
    referenced = set()
    for i, rec in enumerate(records):
        left, right = rec.get("left"), rec.get("right")
        if (left is None) != (right is None):
            raise MalformedDocumentError(
                f"node {i} has only one child index")
        if left is not None:
            for child in (left, right):
                if not isinstance(child, int) or not i < child < len(records):
                    raise MalformedDocumentError(
                        f"node {i} child index {child!r} out of range")
                if child in referenced:
                    raise MalformedDocumentError(
                        f"node {child} referenced twice")
                referenced.add(child)
            nodes[i].left = nodes[left]
            nodes[i].right = nodes[right]
    if referenced != set(range(1, len(records))):
        raise MalformedDocumentError("node list is not a single tree")
    return CartTree(root=nodes[0], fingerprint=fingerprint, config=config,
                    n_training_rows=int(doc["n_training_rows"]))


def _record_to_node(rec, i: int) -> TreeNode:
    if not isinstance(rec, dict):
        raise MalformedDocumentError(f"node {i} is not an object")
    try:
        counts = rec["counts"]
        counts = tuple(int(c) for c in counts) if counts is not None else None
        if rec.get("left") is not None:
            threshold = rec["threshold"]
            if threshold is not None:
                rule = SplitRule(rec["feature"], int(rec["feature_index"]),
                                 threshold=float(threshold))
            else:
                rule = SplitRule(rec["feature"], int(rec["feature_index"]),
                                 subset=frozenset(rec["subset"]),
                                 complement=frozenset(rec["complement"]))
            return TreeNode(n=int(rec["n"]), counts=counts, rule=rule)
        cls = rec.get("class")
        p1 = rec.get("p1")
        mean = rec.get("mean")
        return TreeNode(
            n=int(rec["n"]), counts=counts,
            predicted_class=int(cls) if cls is not None else None,
            positive_proportion=float(p1) if p1 is not None else None,
            mean=float(mean) if mean is not None else None)
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedDocumentError(f"node {i}: {exc}") from None


# -- rendering -------------------------------------------------------------


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _node_label(node: TreeNode) -> str:
    stats = f"n={node.n}"
    if node.counts is not None:
        stats += f" counts={node.counts}"
    if node.is_leaf:
        if node.mean is not None:
            return f"leaf mean={node.mean!r}\\n{stats}"
        return (f"leaf class={node.predicted_class} "
                f"p1={node.positive_proportion!r}\\n{stats}")
    return f"{_dot_escape(node.rule.describe())}\\n{stats}"


def export_dot(tree: CartTree) -> str:
    """Graphviz digraph; edges carry True (left) and False (right)."""
    lines = ["digraph cart {", "  node [shape=box];"]
    nodes = list(tree.root.walk())
    index = {id(node): i for i, node in enumerate(nodes)}
    for i, node in enumerate(nodes):
        lines.append(f'  n{i} [label="{_node_label(node)}"];')
    for i, node in enumerate(nodes):
        if not node.is_leaf:
            lines.append(
                f'  n{i} -> n{index[id(node.left)]} [label="True"];')
            lines.append(
                f'  n{i} -> n{index[id(node.right)]} [label="False"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_text(tree: CartTree) -> str:
    """Indented plain-text outline of the tree."""
    lines: list[str] = []

    def emit(node: TreeNode, prefix: str, tag: str):
        stats = f"n={node.n}"
        if node.counts is not None:
            stats += f" counts={node.counts}"
        if node.is_leaf:
            if node.mean is not None:
                body = f"leaf mean={node.mean!r}"
            else:
                body = (f"leaf class={node.predicted_class} "
                        f"p1={node.positive_proportion!r}")
        else:
            body = node.rule.describe()
        lines.append(f"{prefix}{tag}{body} [{stats}]")
        if not node.is_leaf:
            emit(node.left, prefix + "  ", "True: ")
            emit(node.right, prefix + "  ", "False: ")

    emit(tree.root, "", "")
    return "\n".join(lines) + "\n"
