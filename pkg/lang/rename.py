"""
Consistent variable renaming driven by a variable mapping.

A mapping is a sequence of (source Variable, target) pairs, where the target is a
Variable or a plain name; objects with a `pairs` attribute (mapper.mapping.VariableMapping)
are accepted as well. When two different source names of one function would receive the
same target name, the later one (in declaration order) gets `<target>_<k>` instead, and
the reverse direction undoes that using the same table.
"""
import dataclasses

from . import nodes as n
from .exceptions import RenameError
from .scope import resolve, variables

FORWARD = 'forward'
REVERSE = 'reverse'


def mapping_pairs(mapping):
    pairs = getattr(mapping, 'pairs', mapping)
    if isinstance(pairs, dict):
        pairs = pairs.items()
    return [(source, getattr(target, 'name', target)) for source, target in pairs]


def renaming_table(mapping):
    """decl -> (function, old name, new name) for every source variable of the mapping."""
    table = {}
    claimed = {}  # (function, new name) -> old name
    used = {}  # function -> new names handed out
    for source, target in sorted(mapping_pairs(mapping), key=lambda pair: pair[0].decl):
        taken = used.setdefault(source.function, set())
        name = target
        owner = claimed.get((source.function, name))
        if owner is not None and owner != source.name:
            k = 1
            while f'{target}_{k}' in taken:
                k += 1
            name = f'{target}_{k}'
        claimed.setdefault((source.function, name), source.name)
        taken.add(name)
        table[source.decl] = (source.function, source.name, name)
    return table


class ForwardRenamer(n.NodeTransformer):
    def __init__(self, names):
        self.names = names

    def rename(self, node):
        return dataclasses.replace(node, name=self.names[node.decl])

    visit_Param = rename
    visit_Var = rename

    def visit_Declarator(self, node):
        node = self.generic_visit(node)
        return dataclasses.replace(node, name=self.names[node.decl])


class ReverseRenamer(n.NodeTransformer):
    def __init__(self, names):
        self.names = names
        self.function = None

    def visit_FunctionDef(self, node):
        self.function = node.name
        return self.generic_visit(node)

    def rename(self, node):
        old = self.names.get((self.function, node.name))
        return node if old is None else dataclasses.replace(node, name=old)

    visit_Param = rename
    visit_Var = rename

    def visit_Declarator(self, node):
        return self.rename(self.generic_visit(node))


def rename_variables(program, mapping, direction=FORWARD):
    """
    Forward: rename every variable of a resolved program to its mapped target.
    Reverse: map target names back to the original names (inverse of forward for the same
    mapping); names the mapping does not mention are left alone. Both results are resolved.
    """
    table = renaming_table(mapping)
    if direction == FORWARD:
        missing = [v.key for v in variables(program) if v.decl not in table]
        if missing:
            raise RenameError(f"mapping does not cover {', '.join(missing)}")
        names = {decl: new for decl, (_, _, new) in table.items()}
        return resolve(ForwardRenamer(names).visit(program))
    if direction == REVERSE:
        names = {(fn, new): old for fn, old, new in table.values()}
        return resolve(ReverseRenamer(names).visit(program))
    raise ValueError(f"unknown direction {direction!r}")
