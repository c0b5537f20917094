"""Canonical pretty printer; parse(pretty_print(p)) == p for every resolved program."""
import math

from . import nodes as n

INDENT = '    '

UNARY_PRECEDENCE = 7

EXPRESSIONS = (n.IntLit, n.FloatLit, n.Var, n.Unary, n.IncDec, n.Binary, n.Call)

ESCAPES = {'\n': '\\n', '\t': '\\t', '\\': '\\\\', '"': '\\"', '\0': '\\0', '\r': '\\r'}


def quote(text):
    return '"' + ''.join(ESCAPES.get(ch, ch) for ch in text) + '"'


def expression(node, min_precedence=0):
    if isinstance(node, n.IntLit):
        return str(node.value)
    if isinstance(node, n.FloatLit):
        if math.isinf(node.value):
            # overflows back to inf when lexed
            return '1e999'
        return repr(float(node.value))
    if isinstance(node, n.Var):
        return node.name
    if isinstance(node, n.Call):
        return f"{node.name}({', '.join(expression(a) for a in node.args)})"
    if isinstance(node, n.IncDec):
        return f"{node.op}{node.target.name}" if node.prefix else f"{node.target.name}{node.op}"
    if isinstance(node, n.Unary):
        operand = node.operand
        if isinstance(operand, n.Unary) or (isinstance(operand, n.IncDec) and operand.prefix):
            inner = f"({expression(operand)})"
        else:
            inner = expression(operand, UNARY_PRECEDENCE)
        text, precedence = f"{node.op}{inner}", UNARY_PRECEDENCE
    elif isinstance(node, n.Binary):
        precedence = n.BINARY_PRECEDENCE[node.op]
        text = f"{expression(node.left, precedence)} {node.op} {expression(node.right, precedence + 1)}"
    else:
        raise TypeError(f"not an expression: {node!r}")
    return f"({text})" if precedence < min_precedence else text


def simple(node):
    """Statement text without the trailing semicolon (for-loop headers reuse it)."""
    if isinstance(node, n.Assign):
        return f"{node.target.name} {node.op} {expression(node.value)}"
    if isinstance(node, n.ExprStmt):
        return expression(node.expr)
    if isinstance(node, n.Declaration):
        parts = [d.name if d.init is None else f"{d.name} = {expression(d.init)}" for d in node.declarators]
        return f"{node.type} {', '.join(parts)}"
    raise TypeError(f"not a simple statement: {node!r}")


class Printer:
    def __init__(self):
        self.lines = []

    def emit(self, depth, text):
        self.lines.append(INDENT * depth + text)

    def program(self, program):
        for index, fn in enumerate(program.functions):
            if index:
                self.lines.append('')
            params = ', '.join(f"{p.type} {p.name}" for p in fn.params)
            self.emit(0, f"{fn.return_type} {fn.name}({params}) {{")
            self.statements(fn.body.statements, 1)
            self.emit(0, '}')
        return '\n'.join(self.lines) + '\n'

    def statements(self, statements, depth):
        for stmt in statements:
            self.statement(stmt, depth)

    def statement(self, node, depth):
        if isinstance(node, (n.Assign, n.ExprStmt, n.Declaration)):
            self.emit(depth, simple(node) + ';')
        elif isinstance(node, n.Block):
            self.emit(depth, '{')
            self.statements(node.statements, depth + 1)
            self.emit(depth, '}')
        elif isinstance(node, n.If):
            self.if_chain(node, depth, 'if')
        elif isinstance(node, n.While):
            self.emit(depth, f"while ({expression(node.cond)}) {{")
            self.statements(node.body.statements, depth + 1)
            self.emit(depth, '}')
        elif isinstance(node, n.For):
            init = simple(node.init) if node.init is not None else ''
            cond = expression(node.cond) if node.cond is not None else ''
            update = simple(node.update) if node.update is not None else ''
            header = f"for ({init}; {cond}; {update})".replace(' ;', ';').replace('( ', '(').replace('; )', ';)')
            self.emit(depth, header + ' {')
            self.statements(node.body.statements, depth + 1)
            self.emit(depth, '}')
        elif isinstance(node, n.Return):
            self.emit(depth, 'return;' if node.value is None else f"return {expression(node.value)};")
        elif isinstance(node, n.Break):
            self.emit(depth, 'break;')
        elif isinstance(node, n.Continue):
            self.emit(depth, 'continue;')
        elif isinstance(node, n.Scanf):
            targets = ''.join(f", &{t.name}" for t in node.targets)
            self.emit(depth, f"scanf({quote(node.format)}{targets});")
        elif isinstance(node, n.Printf):
            args = ''.join(f", {expression(a)}" for a in node.args)
            self.emit(depth, f"printf({quote(node.format)}{args});")
        else:
            raise TypeError(f"not a statement: {node!r}")

    def if_chain(self, node, depth, keyword):
        self.emit(depth, f"{keyword} ({expression(node.cond)}) {{")
        self.statements(node.then.statements, depth + 1)
        orelse = node.orelse
        if orelse is None:
            self.emit(depth, '}')
        elif len(orelse.statements) == 1 and isinstance(orelse.statements[0], n.If):
            self.if_chain(orelse.statements[0], depth, "} else if")
        else:
            self.emit(depth, "} else {")
            self.statements(orelse.statements, depth + 1)
            self.emit(depth, '}')


def pretty_print(node):
    """Render a Program (or a single statement / expression) as mini-C text."""
    if isinstance(node, n.Program):
        return Printer().program(node)
    if isinstance(node, EXPRESSIONS):
        return expression(node)
    if isinstance(node, n.Node) and not isinstance(node, (n.FunctionDef, n.Param, n.Declarator)):
        printer = Printer()
        printer.statement(node, 0)
        return '\n'.join(printer.lines)
    raise TypeError(f"cannot print {node!r}")
