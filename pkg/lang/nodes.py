"""
AST node classes for the mini-C subset used by introductory programming assignments.

Nodes are frozen dataclasses so trees are immutable values: structural equality is
dataclass equality, and rewrites build new trees (see NodeTransformer). The resolved
declaration index carried by Var, Param and Declarator is excluded from equality; it is
filled in by lang.scope.resolve.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from functools import cache
from typing import Iterator, Optional, Union

INT = 'int'
FLOAT = 'float'
VOID = 'void'
TYPES = (INT, FLOAT, VOID)

COMPARISON_OPS = ('<', '<=', '>', '>=', '==', '!=')
ARITHMETIC_OPS = ('+', '-', '*', '/', '%')
LOGICAL_OPS = ('&&', '||')
BINARY_OPS = ARITHMETIC_OPS + COMPARISON_OPS + LOGICAL_OPS
UNARY_OPS = ('-', '!')
ASSIGN_OPS = ('=', '+=', '-=', '*=', '/=', '%=')
INCDEC_OPS = ('++', '--')

BINARY_PRECEDENCE = {
    '||': 1,
    '&&': 2,
    '==': 3, '!=': 3,
    '<': 4, '<=': 4, '>': 4, '>=': 4,
    '+': 5, '-': 5,
    '*': 6, '/': 6, '%': 6,
}

# l OP r  ==  r MIRROR[OP] l
MIRROR = {
    '<': '>',
    '>': '<',
    '<=': '>=',
    '>=': '<=',
    '==': '==',
    '!=': '!=',
}


class Node:
    """Base class of every AST node."""

    def children(self) -> Iterator[Node]:
        for name in child_fields(type(self)):
            value = getattr(self, name)
            if isinstance(value, Node):
                yield value
            elif isinstance(value, tuple):
                for item in value:
                    if isinstance(item, Node):
                        yield item


@cache
def child_fields(cls) -> tuple[str, ...]:
    return tuple(f.name for f in dataclasses.fields(cls) if f.compare)


# Expressions

@dataclass(frozen=True)
class IntLit(Node):
    value: int


@dataclass(frozen=True)
class FloatLit(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    name: str
    decl: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Unary(Node):
    op: str
    operand: 'Expr'


@dataclass(frozen=True)
class IncDec(Node):
    op: str  # '++' or '--'
    prefix: bool
    target: Var


@dataclass(frozen=True)
class Binary(Node):
    op: str
    left: 'Expr'
    right: 'Expr'

    @property
    def is_comparison(self) -> bool:
        return self.op in COMPARISON_OPS


@dataclass(frozen=True)
class Call(Node):
    name: str
    args: tuple = ()


Expr = Union[IntLit, FloatLit, Var, Unary, IncDec, Binary, Call]


# Statements

@dataclass(frozen=True)
class Declarator(Node):
    name: str
    init: Optional[Expr] = None
    decl: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class Declaration(Node):
    type: str
    declarators: tuple


@dataclass(frozen=True)
class Assign(Node):
    target: Var
    op: str
    value: Expr


@dataclass(frozen=True)
class ExprStmt(Node):
    expr: Expr


@dataclass(frozen=True)
class Block(Node):
    statements: tuple = ()


@dataclass(frozen=True)
class If(Node):
    cond: Expr
    then: Block
    orelse: Optional[Block] = None


@dataclass(frozen=True)
class While(Node):
    cond: Expr
    body: Block


@dataclass(frozen=True)
class For(Node):
    init: Optional[Union[Declaration, Assign, ExprStmt]]
    cond: Optional[Expr]
    update: Optional[Union[Assign, ExprStmt]]
    body: Block


@dataclass(frozen=True)
class Return(Node):
    value: Optional[Expr] = None


@dataclass(frozen=True)
class Break(Node):
    pass


@dataclass(frozen=True)
class Continue(Node):
    pass


@dataclass(frozen=True)
class Scanf(Node):
    format: str
    targets: tuple = ()


@dataclass(frozen=True)
class Printf(Node):
    format: str
    args: tuple = ()


Stmt = Union[Declaration, Assign, ExprStmt, Block, If, While, For, Return, Break, Continue, Scanf, Printf]


# Top level

@dataclass(frozen=True)
class Param(Node):
    type: str
    name: str
    decl: int = field(default=-1, compare=False)


@dataclass(frozen=True)
class FunctionDef(Node):
    return_type: str
    name: str
    params: tuple
    body: Block


@dataclass(frozen=True)
class Program(Node):
    functions: tuple

    def function(self, name: str) -> Optional[FunctionDef]:
        for fn in self.functions:
            if fn.name == name:
                return fn
        return None


def walk(node: Node) -> Iterator[Node]:
    """Yield node and all of its descendants in source (pre-)order."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(list(current.children())))


class NodeVisitor:
    """Dispatches visit_<ClassName>; falls back to visiting children."""

    def visit(self, node: Node):
        method = getattr(self, 'visit_' + type(node).__name__, self.generic_visit)
        return method(node)

    def generic_visit(self, node: Node):
        for child in node.children():
            self.visit(child)


class NodeTransformer(NodeVisitor):
    """
    Rebuilds a tree bottom-up. A visit method returns the replacement node; inside tuple
    fields (block statements, arguments) it may also return None to drop the item or a
    list to splice several items in its place.
    """

    def generic_visit(self, node: Node):
        changes = {}
        for name in child_fields(type(node)):
            value = getattr(node, name)
            if isinstance(value, Node):
                new = self.visit(value)
                if new is not value:
                    changes[name] = new
            elif isinstance(value, tuple) and any(isinstance(v, Node) for v in value):
                items = []
                for item in value:
                    if not isinstance(item, Node):
                        items.append(item)
                        continue
                    new = self.visit(item)
                    if new is None:
                        continue
                    if isinstance(new, list):
                        items.extend(new)
                    else:
                        items.append(new)
                items = tuple(items)
                if len(items) != len(value) or any(a is not b for a, b in zip(items, value)):
                    changes[name] = items
        return dataclasses.replace(node, **changes) if changes else node
