from collections import Counter

from lang import nodes as n
from lang.edits import find_sites, is_comparison
from lang.printer import expression


def mirrored_expression(cmp):
    """l OP r -> r OP' l; applying it twice gives back the same expression."""
    if not (isinstance(cmp, n.Binary) and cmp.is_comparison):
        raise ValueError(f"not a comparison: {cmp!r}")
    return n.Binary(n.MIRROR[cmp.op], cmp.right, cmp.left)


def oriented(cmp):
    return expression(cmp.left), cmp.op, expression(cmp.right)


def comparison_key(cmp):
    """(left, op, right) text of a comparison or its mirror, whichever sorts first."""
    left, op, right = oriented(cmp)
    return min((left, op, right), (right, n.MIRROR[op], left))


def sides(key):
    left, _, right = key
    return tuple(sorted((left, right)))


def operator_for(cmp, key):
    """Operator that turns cmp, keeping its operand order, into the comparison `key` stands for."""
    left, _, right = oriented(cmp)
    key_left, key_op, key_right = key
    if (left, right) == (key_left, key_right):
        return key_op
    if (left, right) == (key_right, key_left):
        return n.MIRROR[key_op]
    return None


class CmpMultiset(Counter):
    """Comparison keys of a program with their number of occurrences."""

    @classmethod
    def of(cls, program):
        return cls(comparison_key(cmp) for cmp in find_sites(program, is_comparison))

    def surplus_over(self, other):
        """Keys occurring more often here than in other, in sorted order."""
        return sorted(key for key, count in self.items() if count > other[key])
