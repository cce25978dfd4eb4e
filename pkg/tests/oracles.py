"""Independent reference implementations used to check the real ones.

These deliberately avoid the package's algorithms: the labelling oracle
enumerates every labelling against the definition of a complete labelling
and picks the minimal-IN one; the closure oracle iterates a relational
join; the condition oracle interprets raw catalog condition dicts.
"""

from functools import lru_cache

import numpy as np

IN, OUT, UNDEC = 0, 1, 2


@lru_cache(maxsize=None)
def _all_labellings(n):
    """All 3**n labellings as an int8 matrix, one row per labelling."""
    rows = 3**n
    grid = np.zeros((rows, n), dtype=np.int8)
    for column in range(n):
        period = 3 ** (n - column - 1)
        grid[:, column] = (np.arange(rows) // period) % 3
    return grid


def grounded_oracle(n, attacks):
    """Grounded labelling by exhaustive enumeration of complete labellings.

    A labelling is complete iff every argument labelled IN has all
    attackers OUT, every OUT argument has an IN attacker, and every UNDEC
    argument has neither.  The grounded labelling is the complete one whose
    IN set is minimal; minimality and uniqueness are asserted.
    """
    if n == 0:
        return []
    attacker = np.zeros((n, n), dtype=np.int8)  # attacker[i, j]: j attacks i
    for a, b in attacks:
        attacker[b, a] = 1

    labellings = _all_labellings(n)
    is_in = labellings == IN
    not_out = labellings != OUT
    has_in_attacker = (is_in.astype(np.int16) @ attacker.T) > 0
    all_attackers_out = (not_out.astype(np.int16) @ attacker.T) == 0

    legal = np.where(
        is_in,
        all_attackers_out,
        np.where(labellings == OUT, has_in_attacker, ~all_attackers_out & ~has_in_attacker),
    ).all(axis=1)
    complete = labellings[legal]
    assert len(complete), "every attack graph has a complete labelling"

    weights = 1 << np.arange(n)
    in_bits = ((complete == IN) * weights).sum(axis=1)
    smallest = int(np.argmin([bin(b).count("1") for b in in_bits]))
    grounded_bits = int(in_bits[smallest])
    assert all(grounded_bits & int(b) == grounded_bits for b in in_bits), (
        "grounded IN set must be a subset of every complete labelling's IN set"
    )
    return [int(v) for v in complete[smallest]]


def closure_oracle(edges):
    """Transitive closure of an edge list by iterated join."""
    reachable = set(edges)
    changed = True
    while changed:
        changed = False
        for a, b in list(reachable):
            for c, d in list(reachable):
                if b == c and (a, d) not in reachable:
                    reachable.add((a, d))
                    changed = True
    ancestors = {}
    for a, b in reachable:
        ancestors.setdefault(a, set()).add(b)
    return ancestors


def naive_condition_eval(condition: dict, annotation) -> bool:
    """Interpret one raw catalog condition dict against an annotation."""
    field = condition["field"]
    op = condition["op"]
    value = condition.get("value")
    if field == "level":
        extracted = annotation.level.label
        if op == "presence_is":
            return (annotation.level.label != "not detected") == value
    elif field == "resource":
        extracted = annotation.id.resource.value
    elif field == "stage":
        extracted = int(annotation.stage)
    elif field == "derived_from":
        extracted = None if annotation.derived_from is None else str(annotation.derived_from)
    elif field == "precision_loss":
        extracted = dict(annotation.extra).get("precision_loss")
    else:
        extracted = getattr(annotation, field)
    if op == "is_set":
        return extracted is not None
    if op == "is_absent":
        return extracted is None
    if extracted is None:
        return False
    if op == "equals":
        return extracted == value
    if op == "not_equals":
        return extracted != value
    raise AssertionError(f"oracle got unexpected operator {op}")


def naive_pair_condition_eval(condition: dict, first, second) -> bool:
    field = condition["field"]
    value = condition["value"]
    if field == "pair.same_subject":
        outcome = (first.gene, first.tissue, int(first.stage)) == (
            second.gene,
            second.tissue,
            int(second.stage),
        )
    elif field == "pair.distinct_resources":
        outcome = first.id.resource.value != second.id.resource.value
    elif field == "pair.presence_agrees":
        outcome = (first.level.label != "not detected") == (second.level.label != "not detected")
    elif field == "pair.levels_overlap":
        if first.level.label == "not detected" or second.level.label == "not detected":
            outcome = False
        else:
            outcome = first.level.lo <= second.level.hi and second.level.lo <= first.level.hi
    else:
        raise AssertionError(f"oracle got unexpected pair field {field}")
    return outcome == value


def naive_rule_match(record: dict, annotations) -> bool:
    """Does a raw catalog scheme record match the given annotation tuple?"""
    for condition in record["conditions"]:
        if condition["field"].startswith("pair."):
            if not naive_pair_condition_eval(condition, *annotations):
                return False
        else:
            if not all(naive_condition_eval(condition, a) for a in annotations):
                return False
    return True


def naive_threshold_resolution(entries, parent_map, tissue):
    """Nearest threshold-bearing ancestor by exhaustive level-order search."""
    if tissue in entries:
        return entries[tissue]
    frontier = {tissue}
    seen = {tissue}
    while frontier:
        next_frontier = set()
        for t in frontier:
            next_frontier.update(parent_map.get(t, ()))
        next_frontier -= seen
        if not next_frontier:
            return None
        holders = sorted(t for t in next_frontier if t in entries)
        if holders:
            return entries[holders[0]]
        seen |= next_frontier
        frontier = next_frontier
    return None


def naive_aba_classification(entries, parent_map, tissue, value):
    cuts = naive_threshold_resolution(entries, parent_map, tissue)
    if cuts is None:
        return None
    weak, moderate, strong = cuts
    if value <= weak:
        return "not detected"
    if value <= moderate:
        return "weak"
    if value <= strong:
        return "moderate"
    return "strong"
