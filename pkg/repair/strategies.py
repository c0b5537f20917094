"""
Candidate generators for the three bug classes.

Each strategy renames the buggy program onto the correct program's variable names with the
given mapping, compares the two programs, and lazily yields edited buggy programs renamed
back to the buggy program's own names.
"""
import dataclasses
from collections import Counter

from lang import nodes as n
from lang.edits import edit_site, find_sites, is_comparison, read_sites, replace_read
from lang.exceptions import ScopeError
from lang.printer import simple
from lang.rename import REVERSE, rename_variables
from lang.scope import occurrences, resolve

from .comparisons import CmpMultiset, comparison_key, operator_for, sides


def restore(candidate, mapping):
    return rename_variables(candidate, mapping, REVERSE)


def repair_wco(buggy, correct, mapping):
    """Replace comparison operators so the buggy program's comparisons match the correct program's."""
    renamed = rename_variables(buggy, mapping)
    wanted = CmpMultiset.of(correct).surplus_over(CmpMultiset.of(renamed))
    for index, site in enumerate(find_sites(renamed, is_comparison)):
        for key in wanted:
            if sides(key) != sides(comparison_key(site)):
                continue
            op = operator_for(site, key)
            if op is None or op == site.op:
                continue
            candidate = edit_site(renamed, is_comparison, index, lambda node: dataclasses.replace(node, op=op))
            yield restore(resolve(candidate), mapping)


def repair_vm(buggy, correct, mapping):
    """Swap one read of an over-used variable for an under-used one."""
    renamed = rename_variables(buggy, mapping)
    buggy_counts = Counter(var.name for var in occurrences(renamed))
    correct_counts = Counter(var.name for var in occurrences(correct))
    over = sorted(name for name in buggy_counts if buggy_counts[name] > correct_counts[name])
    under = sorted(name for name in correct_counts if correct_counts[name] > buggy_counts[name])
    reads = read_sites(renamed)
    for x in over:
        for y in under:
            for index, var in enumerate(reads):
                if var.name != x:
                    continue
                try:
                    candidate = resolve(replace_read(renamed, index, y))
                except ScopeError:
                    continue
                yield restore(candidate, mapping)


def statement_snippets(program):
    """
    (key, snippet) for every expression statement and assignment in source order,
    including for-loop clauses. An initialiser counts as an assignment and prefix and
    postfix increments at statement position share a key.
    """
    for node in n.walk(program):
        if isinstance(node, n.Declaration):
            for d in node.declarators:
                if d.init is not None:
                    snippet = n.Assign(n.Var(d.name), '=', d.init)
                    yield simple(snippet), snippet
        elif isinstance(node, n.ExprStmt) and isinstance(node.expr, n.IncDec):
            yield simple(n.ExprStmt(dataclasses.replace(node.expr, prefix=True))), node
        elif isinstance(node, (n.ExprStmt, n.Assign)):
            yield simple(node), node


def missing_snippets(buggy, correct):
    buggy_counts = Counter(key for key, _ in statement_snippets(buggy))
    correct_counts = Counter()
    first = {}
    for key, snippet in statement_snippets(correct):
        correct_counts[key] += 1
        first.setdefault(key, snippet)
    return [snippet for key, snippet in first.items() if correct_counts[key] > buggy_counts[key]]


def is_block(node):
    return isinstance(node, n.Block)


def insert_at(position, snippet):
    def edit(block):
        statements = block.statements[:position] + (snippet,) + block.statements[position:]
        return dataclasses.replace(block, statements=statements)
    return edit


def repair_me(buggy, correct, mapping):
    """Insert statements the correct program has more of at every position of every block."""
    renamed = rename_variables(buggy, mapping)
    blocks = find_sites(renamed, is_block)
    for snippet in missing_snippets(renamed, correct):
        for index, block in enumerate(blocks):
            for position in range(len(block.statements) + 1):
                try:
                    candidate = resolve(edit_site(renamed, is_block, index, insert_at(position, snippet)))
                except ScopeError:
                    continue
                yield restore(candidate, mapping)


STRATEGIES = (
    ('wco', repair_wco),
    ('vm', repair_vm),
    ('me', repair_me),
)
