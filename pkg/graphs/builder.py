"""
AST to typed graph conversion.

Every AST node becomes a graph node labelled with its kind; each declared variable gets
one extra `var` node (appended after the AST nodes, in declaration order) that all of its
ID occurrences connect to. Five edge families are available, realised as eight relations:

    0 child-fwd   parent -> child        1 child-back  child -> parent
    2 sibling     child -> next sibling
    3 write-fwd   ID -> var              4 write-back  var -> ID
    5 read-fwd    ID -> var              6 read-back   var -> ID
    7 chrono      ID -> next ID of the same variable

An occurrence is a write when it is the target of an assignment, the operand of ++/--,
a scanf argument, a declarator with an initialiser or a parameter.
"""
from collections import namedtuple
from dataclasses import dataclass, field

from lang import nodes as n
from lang.scope import variables

from .vocab import VAR_KIND, VOCAB

CHILD_FWD, CHILD_BACK, SIBLING, WRITE_FWD, WRITE_BACK, READ_FWD, READ_BACK, CHRONO = range(8)
NUM_RELATIONS = 8
RELATION_NAMES = (
    'child-fwd', 'child-back', 'sibling', 'write-fwd', 'write-back', 'read-fwd', 'read-back', 'chrono',
)

FAMILIES = ('ast', 'sibling', 'write', 'read', 'chrono')


@dataclass(frozen=True)
class EdgeSetConfig:
    ast: bool = True
    sibling: bool = True
    write: bool = True
    read: bool = True
    chrono: bool = True

    def __post_init__(self):
        if not any(getattr(self, family) for family in FAMILIES):
            raise ValueError("at least one edge family must be enabled")

    @classmethod
    def from_mask(cls, mask):
        """'0,1,3' or '013' -> config with those families enabled (0 ast ... 4 chrono)."""
        digits = {ch for ch in str(mask) if not ch.isspace() and ch != ','}
        unknown = digits - set('01234')
        if unknown:
            raise ValueError(f"unknown edge families {sorted(unknown)}; use digits 0-4")
        return cls(**{family: str(i) in digits for i, family in enumerate(FAMILIES)})

    @property
    def mask(self):
        return ''.join(str(i) for i, family in enumerate(FAMILIES) if getattr(self, family))

    def to_dict(self):
        return {family: getattr(self, family) for family in FAMILIES}


@dataclass(frozen=True)
class ProgramGraph:
    nodes: tuple
    edges: tuple
    var_nodes: tuple
    variables: tuple = field(default=(), compare=False)

    @property
    def num_nodes(self):
        return len(self.nodes)

    def edges_of(self, relation):
        return [(src, dst) for src, dst, rel in self.edges if rel == relation]


Occurrence = namedtuple('Occurrence', 'var write')
Synthetic = namedtuple('Synthetic', 'kind parts')


def parts_of(node):
    """(kind, ordered children) of an AST node; children may be nodes, kinds or occurrences."""
    if isinstance(node, n.Program):
        return 'program', list(node.functions)
    if isinstance(node, n.FunctionDef):
        return 'function', [f'type_{node.return_type}', Synthetic('params', list(node.params)), node.body]
    if isinstance(node, n.Param):
        return 'param', [f'type_{node.type}', Occurrence(n.Var(node.name, node.decl), True)]
    if isinstance(node, n.Block):
        return 'block', list(node.statements)
    if isinstance(node, n.Declaration):
        return 'decl', [f'type_{node.type}', *node.declarators]
    if isinstance(node, n.Declarator):
        if node.init is None:
            return 'declarator', []
        return 'declarator', [Occurrence(n.Var(node.name, node.decl), True), node.init]
    if isinstance(node, n.Assign):
        target = Occurrence(node.target, True)
        if node.op == '=':
            return 'assign', [target, node.value]
        return 'assign', [target, f'op:{node.op}', node.value]
    if isinstance(node, n.ExprStmt):
        return 'expr_stmt', [node.expr]
    if isinstance(node, n.If):
        return 'if', [node.cond, node.then] + ([node.orelse] if node.orelse is not None else [])
    if isinstance(node, n.While):
        return 'while', [node.cond, node.body]
    if isinstance(node, n.For):
        return 'for', [
            'empty' if part is None else part for part in (node.init, node.cond, node.update)
        ] + [node.body]
    if isinstance(node, n.Return):
        return 'return', [] if node.value is None else [node.value]
    if isinstance(node, n.Break):
        return 'break', []
    if isinstance(node, n.Continue):
        return 'continue', []
    if isinstance(node, n.Scanf):
        return 'scanf', ['format_string'] + [Occurrence(t, True) for t in node.targets]
    if isinstance(node, n.Printf):
        return 'printf', ['format_string', *node.args]
    if isinstance(node, n.Call):
        return 'call', list(node.args)
    if isinstance(node, n.Unary):
        return 'unary', [f'op:{node.op}', node.operand]
    if isinstance(node, n.IncDec):
        kind = 'prefix_incdec' if node.prefix else 'postfix_incdec'
        return kind, [f'op:{node.op}', Occurrence(node.target, True)]
    if isinstance(node, n.Binary):
        return 'expr', [node.left, f'op:{node.op}', node.right]
    if isinstance(node, n.IntLit):
        return 'int_const', []
    if isinstance(node, n.FloatLit):
        return 'float_const', []
    raise TypeError(f"cannot encode {node!r}")


class GraphBuilder:
    def __init__(self, vocab=VOCAB):
        self.vocab = vocab
        self.kinds = []
        self.tree = []  # (parent, [children]) in completion order
        self.occurrences = []  # (ID node, decl, is_write) in preorder

    def new(self, kind):
        self.kinds.append(self.vocab.index(kind))
        return len(self.kinds) - 1

    def build(self, item):
        if isinstance(item, n.Var):
            item = Occurrence(item, False)
        if isinstance(item, str):
            return self.new(item)
        if isinstance(item, Occurrence):
            index = self.new('ID')
            self.occurrences.append((index, item.var.decl, item.write))
            return index
        if isinstance(item, Synthetic):
            kind, parts = item
        else:
            kind, parts = parts_of(item)
        index = self.new(kind)
        children = [self.build(part) for part in parts]
        if children:
            self.tree.append((index, children))
        return index

    def graph(self, program, config):
        self.build(program)
        found = variables(program)
        var_node = {v.decl: self.new(VAR_KIND) for v in found}
        edges = []
        for parent, children in self.tree:
            if config.ast:
                for child in children:
                    edges.append((parent, child, CHILD_FWD))
                    edges.append((child, parent, CHILD_BACK))
            if config.sibling:
                edges.extend((a, b, SIBLING) for a, b in zip(children, children[1:]))
        last_seen = {}
        for index, decl, write in self.occurrences:
            if write and config.write:
                edges.append((index, var_node[decl], WRITE_FWD))
                edges.append((var_node[decl], index, WRITE_BACK))
            elif not write and config.read:
                edges.append((index, var_node[decl], READ_FWD))
                edges.append((var_node[decl], index, READ_BACK))
            if config.chrono and decl in last_seen:
                edges.append((last_seen[decl], index, CHRONO))
            last_seen[decl] = index
        return ProgramGraph(
            nodes=tuple(self.kinds),
            edges=tuple(sorted(edges, key=lambda e: (e[2], e[0], e[1]))),
            var_nodes=tuple(var_node[v.decl] for v in found),
            variables=found,
        )


def build_graph(program, config=None, vocab=VOCAB):
    """Graph of a resolved program; `config` selects the edge families (all by default)."""
    return GraphBuilder(vocab).graph(program, config or EdgeSetConfig())
