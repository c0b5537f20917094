"""
Scope analysis: binds every variable occurrence to its declaration.

Declarations are numbered in source order across the whole program (parameters first,
then the body of each function). A function's parameters and the outermost block of its
body share one scope; every nested block, and the header of a for loop, opens a new one.
"""
import dataclasses
from collections import Counter
from dataclasses import dataclass

from . import nodes as n
from .exceptions import ScopeError


@dataclass(frozen=True)
class Variable:
    """One declared variable (a parameter or a declarator)."""
    decl: int
    name: str
    function: str
    type: str
    key: str

    def __str__(self):
        return self.key


class Resolver(n.NodeTransformer):
    def __init__(self, program):
        self.scopes = []
        self.counter = 0
        self.signatures = {}
        for fn in program.functions:
            if fn.name in self.signatures:
                raise ScopeError(f"function '{fn.name}' is defined twice")
            self.signatures[fn.name] = len(fn.params)
        if 'main' not in self.signatures:
            raise ScopeError("program has no main function")

    def declare(self, name):
        scope = self.scopes[-1]
        if name in scope:
            raise ScopeError(f"duplicate declaration of '{name}'")
        scope[name] = self.counter
        self.counter += 1
        return scope[name]

    def lookup(self, name):
        for scope in reversed(self.scopes):
            if name in scope:
                return scope[name]
        raise ScopeError(f"undeclared variable '{name}'")

    def visit_FunctionDef(self, node):
        self.scopes.append({})
        params = tuple(dataclasses.replace(p, decl=self.declare(p.name)) for p in node.params)
        body = dataclasses.replace(node.body, statements=tuple(self.visit(s) for s in node.body.statements))
        self.scopes.pop()
        return dataclasses.replace(node, params=params, body=body)

    def visit_Block(self, node):
        self.scopes.append({})
        try:
            return self.generic_visit(node)
        finally:
            self.scopes.pop()

    def visit_For(self, node):
        self.scopes.append({})
        try:
            return self.generic_visit(node)
        finally:
            self.scopes.pop()

    def visit_Declarator(self, node):
        init = self.visit(node.init) if node.init is not None else None
        return dataclasses.replace(node, init=init, decl=self.declare(node.name))

    def visit_Var(self, node):
        return dataclasses.replace(node, decl=self.lookup(node.name))

    def visit_Call(self, node):
        if node.name not in self.signatures:
            raise ScopeError(f"call to undefined function '{node.name}'")
        if self.signatures[node.name] != len(node.args):
            raise ScopeError(
                f"function '{node.name}' takes {self.signatures[node.name]} arguments, {len(node.args)} given"
            )
        return self.generic_visit(node)


def resolve(program):
    """Return a copy of program with declaration indices filled in; raises ScopeError."""
    return Resolver(program).visit(program)


def variables(program):
    """Declared variables of a resolved program, in declaration order."""
    found = []
    for fn in program.functions:
        for p in fn.params:
            found.append((p.decl, p.name, fn.name, p.type))
        for node in n.walk(fn.body):
            if isinstance(node, n.Declaration):
                for d in node.declarators:
                    found.append((d.decl, d.name, fn.name, node.type))
    found.sort()
    names = Counter(name for _, name, _, _ in found)
    qualified = Counter((fn, name) for _, name, fn, _ in found)
    seen = Counter()
    result = []
    for decl, name, fn, var_type in found:
        if names[name] == 1:
            key = name
        elif qualified[(fn, name)] == 1:
            key = f'{fn}.{name}'
        else:
            seen[(fn, name)] += 1
            key = f'{fn}.{name}#{seen[(fn, name)]}'
        result.append(Variable(decl, name, fn, var_type, key))
    return tuple(result)


def occurrences(program):
    """Var nodes of a resolved program in source order."""
    return [node for node in n.walk(program) if isinstance(node, n.Var)]
