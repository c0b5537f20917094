"""
Node kind vocabulary shared by graph construction, training and inference.

Kinds name syntax only: nonterminals, operator tokens, abstract literal kinds and the
distinguished `var` kind for per-variable nodes. No identifier ever becomes a kind.
"""
import hashlib

from lang import nodes as n

STRUCTURE_KINDS = (
    'program', 'function', 'params', 'param', 'block', 'decl', 'declarator', 'assign',
    'expr_stmt', 'if', 'for', 'while', 'return', 'break', 'continue', 'scanf', 'printf',
    'call', 'unary', 'prefix_incdec', 'postfix_incdec', 'expr', 'empty',
)
LEAF_KINDS = ('ID', 'int_const', 'float_const', 'format_string')
TYPE_KINDS = tuple(f'type_{t}' for t in n.TYPES)
OPERATOR_KINDS = tuple(
    f'op:{op}'
    for op in dict.fromkeys(n.BINARY_OPS + n.UNARY_OPS + n.ASSIGN_OPS[1:] + n.INCDEC_OPS)
)
VAR_KIND = 'var'


class NodeTypeVocab:
    def __init__(self, kinds):
        self.kinds = tuple(kinds)
        self.indices = {kind: i for i, kind in enumerate(self.kinds)}
        if len(self.indices) != len(self.kinds):
            raise ValueError("node kinds must be unique")

    def __len__(self):
        return len(self.kinds)

    def __eq__(self, other):
        return isinstance(other, NodeTypeVocab) and self.kinds == other.kinds

    def __hash__(self):
        return hash(self.kinds)

    def index(self, kind):
        return self.indices[kind]

    @property
    def fingerprint(self):
        return hashlib.sha256('\n'.join(self.kinds).encode()).hexdigest()


VOCAB = NodeTypeVocab(STRUCTURE_KINDS + LEAF_KINDS + TYPE_KINDS + OPERATOR_KINDS + (VAR_KIND,))
