"""
Semantics-preserving program mutations.

Each mutation family finds its sites in a fixed traversal order and rewrites either all of
them or, given an `rng`, a random subset (each site with probability 1/2, at least one).
"""
import dataclasses
import random
from dataclasses import dataclass

from lang import nodes as n
from lang.scope import resolve

MIRROR_COMPARISONS = 'mirror-comparisons'
SWAP_IF_ELSE = 'swap-if-else'
MIRROR_INCDEC = 'mirror-incdec'
REORDER_DECLS = 'reorder-decls'
FOR_TO_WHILE = 'for-to-while'

# bit i of a configuration id enables FAMILY_BITS[i]
FAMILY_BITS = (MIRROR_COMPARISONS, SWAP_IF_ELSE, MIRROR_INCDEC, REORDER_DECLS, FOR_TO_WHILE)
CANONICAL_ORDER = (REORDER_DECLS, MIRROR_INCDEC, MIRROR_COMPARISONS, SWAP_IF_ELSE, FOR_TO_WHILE)


@dataclass(frozen=True)
class MutationConfig:
    id: int

    def __post_init__(self):
        if not 1 <= self.id <= 31:
            raise ValueError("mutation configuration ids run from 1 to 31")

    @property
    def families(self):
        return tuple(f for f in CANONICAL_ORDER if self.id >> FAMILY_BITS.index(f) & 1)

    @classmethod
    def all(cls):
        return tuple(cls(i) for i in range(1, 32))

    def __str__(self):
        return f"{self.id}:{'+'.join(self.families)}"


@dataclass(frozen=True)
class MutationResult:
    program: n.Program
    applied: tuple = ()

    @property
    def changed(self):
        return bool(self.applied)


def side_effect_free(expr):
    return not any(isinstance(node, (n.IncDec, n.Call)) for node in n.walk(expr))


def is_literal(expr):
    if isinstance(expr, n.Unary) and expr.op == '-':
        expr = expr.operand
    return isinstance(expr, (n.IntLit, n.FloatLit))


def has_direct_continue(node):
    """True if a `continue` in node would belong to the loop enclosing node."""
    if isinstance(node, n.Continue):
        return True
    if isinstance(node, (n.While, n.For)):
        return False
    return any(has_direct_continue(child) for child in node.children())


def negate(expr):
    if isinstance(expr, n.Unary) and expr.op == '!':
        return expr.operand
    return n.Unary('!', expr)


class SiteRewriter(n.NodeTransformer):
    """Counts sites during traversal and rewrites those whose number is in `chosen`."""

    def __init__(self, chosen=None, rng=None):
        self.chosen = chosen
        self.rng = rng
        self.sites = 0
        self.rewritten = 0

    def take(self):
        index = self.sites
        self.sites += 1
        if self.chosen is None or index in self.chosen:
            self.rewritten += 1
            return True
        return False


class MirrorComparisons(SiteRewriter):
    def visit_Binary(self, node):
        node = self.generic_visit(node)
        if node.is_comparison and side_effect_free(node.left) and side_effect_free(node.right) and self.take():
            return n.Binary(n.MIRROR[node.op], node.right, node.left)
        return node


class SwapIfElse(SiteRewriter):
    def visit_If(self, node):
        node = self.generic_visit(node)
        if node.orelse is not None and self.take():
            return n.If(negate(node.cond), node.orelse, node.then)
        return node


class MirrorIncDec(SiteRewriter):
    def visit_ExprStmt(self, node):
        if isinstance(node.expr, n.IncDec) and self.take():
            return n.ExprStmt(dataclasses.replace(node.expr, prefix=not node.expr.prefix))
        return node


class ReorderDecls(SiteRewriter):
    """Permutes declarators of one declaration, or runs of adjacent declarations, with literal initialisers."""

    def permute(self, items):
        items = list(items)
        original = list(items)
        if self.rng is None:
            items.reverse()
        else:
            self.rng.shuffle(items)
            if items == original:
                items = items[1:] + items[:1]
        return items

    @staticmethod
    def reorderable(stmt):
        return isinstance(stmt, n.Declaration) and all(d.init is None or is_literal(d.init) for d in stmt.declarators)

    def visit_Block(self, node):
        node = self.generic_visit(node)
        statements = []
        for stmt in node.statements:
            if self.reorderable(stmt) and len(stmt.declarators) > 1 and self.take():
                stmt = n.Declaration(stmt.type, tuple(self.permute(stmt.declarators)))
            statements.append(stmt)
        result = []
        run = []
        for stmt in statements + [None]:
            if stmt is not None and self.reorderable(stmt):
                run.append(stmt)
                continue
            if len(run) > 1 and self.take():
                run = self.permute(run)
            result.extend(run)
            run = []
            if stmt is not None:
                result.append(stmt)
        return n.Block(tuple(result))


def shadows_update(node):
    """True if the loop body declares a name its update clause uses."""
    if node.update is None:
        return False
    used = {v.name for v in n.walk(node.update) if isinstance(v, n.Var)}
    declared = {
        d.name for stmt in node.body.statements if isinstance(stmt, n.Declaration) for d in stmt.declarators
    }
    return bool(used & declared)


def loop_as_while(node, update=True):
    """The while loop running for-loop node's body, or None when moving the update would change its meaning."""
    if has_direct_continue(node.body) or shadows_update(node):
        return None
    tail = (node.update,) if update and node.update is not None else ()
    return n.While(node.cond if node.cond is not None else n.IntLit(1), n.Block(node.body.statements + tail))


def hoisted(init, loop):
    """init followed by loop, with a declared loop variable kept scoped to the loop."""
    if init is None:
        return loop
    if isinstance(init, n.Declaration):
        return n.Block((init, loop))
    return [init, loop]


class ForToWhile(SiteRewriter):
    def visit_For(self, node):
        node = self.generic_visit(node)
        loop = loop_as_while(node)
        if loop is None or not self.take():
            return node
        return hoisted(node.init, loop)


REWRITERS = {
    MIRROR_COMPARISONS: MirrorComparisons,
    SWAP_IF_ELSE: SwapIfElse,
    MIRROR_INCDEC: MirrorIncDec,
    REORDER_DECLS: ReorderDecls,
    FOR_TO_WHILE: ForToWhile,
}


def choose_sites(count, rng):
    if rng is None:
        return None
    chosen = {i for i in range(count) if rng.random() < 0.5}
    if not chosen:
        chosen = {rng.randrange(count)}
    return chosen


def mutate(program, family, rng=None):
    """Apply one family; returns a MutationResult flagged unapplied when there is no site."""
    rewriter_class = REWRITERS[family]
    counter = rewriter_class(chosen=set())
    counter.visit(program)
    if counter.sites == 0:
        return MutationResult(program)
    rewriter = rewriter_class(chosen_sites := choose_sites(counter.sites, rng), rng)
    mutated = rewriter.visit(program)
    if chosen_sites is not None and rewriter.rewritten != len(chosen_sites):
        raise AssertionError(f"{family}: site numbering changed during rewriting")
    return MutationResult(resolve(mutated), (family,))


def mirror_comparisons(program, rng=None):
    return mutate(program, MIRROR_COMPARISONS, rng)


def swap_if_else(program, rng=None):
    return mutate(program, SWAP_IF_ELSE, rng)


def mirror_incdec(program, rng=None):
    return mutate(program, MIRROR_INCDEC, rng)


def reorder_decls(program, seed=0, rng=None):
    return mutate(program, REORDER_DECLS, rng or random.Random(seed))


def for_to_while(program, rng=None):
    return mutate(program, FOR_TO_WHILE, rng)


def apply_config(program, config, seed=None, rng=None):
    """Apply the families of `config` in canonical order."""
    if rng is None and seed is not None:
        rng = random.Random(seed)
    applied = []
    for family in config.families:
        result = mutate(program, family, rng)
        program = result.program
        applied.extend(result.applied)
    return MutationResult(program, tuple(applied))
