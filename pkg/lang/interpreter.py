"""
Deterministic tree-walking interpreter for resolved mini-C programs.

Integers are 32-bit two's complement (every int result is wrapped), floats are Python
floats (IEEE-754 binary64). Uninitialised variables read as a fixed sentinel (ints) or
NaN (floats) and set the uninitialized_read flag. Faults never escape as exceptions:
they end the run and are reported through ExecutionResult.status.
"""
import logging
import math
import re
from dataclasses import dataclass

from . import nodes as n
from .scope import variables

logger = logging.getLogger(__name__)

DEFAULT_STEP_LIMIT = 10 ** 7
MAX_CALL_DEPTH = 64

INT_SENTINEL = 0x7FFF0001
FLOAT_SENTINEL = math.nan

OK = 'ok'
RUNTIME_ERROR = 'runtime-error'
STEP_LIMIT_EXCEEDED = 'step-limit-exceeded'

PRINTF_DIRECTIVE = re.compile(r'%([-+ 0#]*)(\d*)(?:\.(\d+))?(l?)([dif%])')
SCANF_DIRECTIVE = re.compile(r'%(l?)([dif])')
INT_TOKEN = re.compile(r'[+-]?\d+')
FLOAT_TOKEN = re.compile(r'[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-]?(?:inf|nan)', re.IGNORECASE)


@dataclass(frozen=True)
class ExecutionResult:
    stdout: str
    status: str = OK
    error_kind: str = ''
    uninitialized_read: bool = False
    printed_nan: bool = False
    steps: int = 0

    @property
    def ok(self):
        return self.status == OK


def wrap(value):
    return ((value + 2 ** 31) % 2 ** 32) - 2 ** 31


class RuntimeFault(Exception):
    def __init__(self, kind):
        super().__init__(kind)
        self.kind = kind


class StepLimitExceeded(Exception):
    pass


class BreakLoop(Exception):
    pass


class ContinueLoop(Exception):
    pass


class ReturnValue(Exception):
    def __init__(self, value):
        super().__init__()
        self.value = value


UNSET = object()


class Interpreter:
    def __init__(self, program, stdin, step_limit):
        self.program = program
        self.functions = {fn.name: fn for fn in program.functions}
        self.types = {v.decl: v.type for v in variables(program)}
        self.tokens = stdin.split()
        self.cursor = 0
        self.step_limit = step_limit
        self.steps = 0
        self.depth = 0
        self.out = []
        self.frame = {}
        self.uninitialized_read = False
        self.printed_nan = False

    def run(self):
        status, kind = OK, ''
        try:
            self.call(self.functions['main'], ())
        except RuntimeFault as fault:
            status, kind = RUNTIME_ERROR, fault.kind
        except StepLimitExceeded:
            status = STEP_LIMIT_EXCEEDED
        except RecursionError:
            status, kind = RUNTIME_ERROR, 'stack-overflow'
        return ExecutionResult(
            stdout=''.join(self.out),
            status=status,
            error_kind=kind,
            uninitialized_read=self.uninitialized_read,
            printed_nan=self.printed_nan,
            steps=self.steps,
        )

    def tick(self):
        self.steps += 1
        if self.steps > self.step_limit:
            raise StepLimitExceeded()

    # Values

    def convert(self, value, var_type):
        if var_type == n.FLOAT:
            return float(value)
        if isinstance(value, float):
            if math.isnan(value) or math.isinf(value):
                raise RuntimeFault('invalid-conversion')
            return wrap(int(value))
        return wrap(value)

    def load(self, var):
        value = self.frame.get(var.decl, UNSET)
        if value is UNSET:
            self.uninitialized_read = True
            return FLOAT_SENTINEL if self.types[var.decl] == n.FLOAT else INT_SENTINEL
        return value

    def store(self, var, value):
        self.frame[var.decl] = self.convert(value, self.types[var.decl])

    # Functions

    def call(self, fn, args):
        if self.depth >= MAX_CALL_DEPTH:
            raise RuntimeFault('stack-overflow')
        saved = self.frame
        self.frame = {p.decl: self.convert(a, p.type) for p, a in zip(fn.params, args)}
        self.depth += 1
        try:
            self.block(fn.body)
        except ReturnValue as ret:
            if fn.return_type == n.VOID or ret.value is None:
                return None
            return self.convert(ret.value, fn.return_type)
        except (BreakLoop, ContinueLoop):
            raise RuntimeFault('jump-outside-loop') from None
        finally:
            self.frame = saved
            self.depth -= 1
        if fn.return_type == n.FLOAT:
            return FLOAT_SENTINEL
        return None if fn.return_type == n.VOID else INT_SENTINEL

    # Statements

    def block(self, block):
        for stmt in block.statements:
            self.execute(stmt)

    def execute(self, stmt):
        self.tick()
        method = getattr(self, 'exec_' + type(stmt).__name__)
        method(stmt)

    def exec_Block(self, stmt):
        self.block(stmt)

    def exec_Declaration(self, stmt):
        for d in stmt.declarators:
            if d.init is None:
                self.frame[d.decl] = UNSET
            else:
                self.frame[d.decl] = self.convert(self.evaluate(d.init), stmt.type)

    def exec_Assign(self, stmt):
        value = self.evaluate(stmt.value)
        if stmt.op != '=':
            value = self.arithmetic(stmt.op[0], self.load(stmt.target), value)
        self.store(stmt.target, value)

    def exec_ExprStmt(self, stmt):
        self.evaluate(stmt.expr)

    def exec_If(self, stmt):
        if self.truthy(self.evaluate(stmt.cond)):
            self.block(stmt.then)
        elif stmt.orelse is not None:
            self.block(stmt.orelse)

    def exec_While(self, stmt):
        while True:
            self.tick()
            if not self.truthy(self.evaluate(stmt.cond)):
                return
            try:
                self.block(stmt.body)
            except BreakLoop:
                return
            except ContinueLoop:
                pass

    def exec_For(self, stmt):
        if stmt.init is not None:
            self.execute(stmt.init)
        while True:
            self.tick()
            if stmt.cond is not None and not self.truthy(self.evaluate(stmt.cond)):
                return
            try:
                self.block(stmt.body)
            except BreakLoop:
                return
            except ContinueLoop:
                pass
            if stmt.update is not None:
                self.execute(stmt.update)

    def exec_Return(self, stmt):
        raise ReturnValue(None if stmt.value is None else self.evaluate(stmt.value))

    def exec_Break(self, stmt):
        raise BreakLoop()

    def exec_Continue(self, stmt):
        raise ContinueLoop()

    def exec_Scanf(self, stmt):
        directives = SCANF_DIRECTIVE.findall(stmt.format)
        if len(directives) != len(stmt.targets):
            raise RuntimeFault('format-mismatch')
        for (_, conversion), target in zip(directives, stmt.targets):
            if self.cursor >= len(self.tokens):
                raise RuntimeFault('input-exhausted')
            token = self.tokens[self.cursor]
            self.cursor += 1
            if conversion == 'f':
                if not FLOAT_TOKEN.fullmatch(token):
                    raise RuntimeFault('bad-input')
                value = float(token)
            else:
                if not INT_TOKEN.fullmatch(token):
                    raise RuntimeFault('bad-input')
                value = int(token)
            self.store(target, value)

    def exec_Printf(self, stmt):
        args = [self.evaluate(a) for a in stmt.args]
        pieces = []
        position = 0
        index = 0
        for match in PRINTF_DIRECTIVE.finditer(stmt.format):
            pieces.append(stmt.format[position:match.start()])
            position = match.end()
            flags, width, precision, _, conversion = match.groups()
            if conversion == '%':
                pieces.append('%')
                continue
            if index >= len(args):
                raise RuntimeFault('format-mismatch')
            value = args[index]
            index += 1
            spec = '%' + flags + width + ('.' + precision if precision is not None else '')
            if conversion == 'f':
                if not isinstance(value, float):
                    raise RuntimeFault('format-mismatch')
                if math.isnan(value):
                    self.printed_nan = True
                pieces.append((spec + 'f') % value)
            else:
                if isinstance(value, float):
                    raise RuntimeFault('format-mismatch')
                pieces.append((spec + 'd') % value)
        pieces.append(stmt.format[position:])
        self.out.append(''.join(pieces))

    # Expressions

    @staticmethod
    def truthy(value):
        return value != 0

    def evaluate(self, expr):
        if isinstance(expr, n.IntLit):
            return wrap(expr.value)
        if isinstance(expr, n.FloatLit):
            return float(expr.value)
        if isinstance(expr, n.Var):
            return self.load(expr)
        if isinstance(expr, n.Unary):
            value = self.evaluate(expr.operand)
            if expr.op == '!':
                return int(value == 0)
            return -value if isinstance(value, float) else wrap(-value)
        if isinstance(expr, n.IncDec):
            old = self.load(expr.target)
            new = self.arithmetic('+' if expr.op == '++' else '-', old, 1)
            self.store(expr.target, new)
            return self.load(expr.target) if expr.prefix else old
        if isinstance(expr, n.Binary):
            return self.binary(expr)
        if isinstance(expr, n.Call):
            args = [self.evaluate(a) for a in expr.args]
            result = self.call(self.functions[expr.name], args)
            return 0 if result is None else result
        raise TypeError(f"not an expression: {expr!r}")

    def binary(self, expr):
        if expr.op == '&&':
            return int(self.truthy(self.evaluate(expr.left)) and self.truthy(self.evaluate(expr.right)))
        if expr.op == '||':
            return int(self.truthy(self.evaluate(expr.left)) or self.truthy(self.evaluate(expr.right)))
        left = self.evaluate(expr.left)
        right = self.evaluate(expr.right)
        if expr.op in n.COMPARISON_OPS:
            return int(compare(expr.op, left, right))
        return self.arithmetic(expr.op, left, right)

    def arithmetic(self, op, left, right):
        if isinstance(left, float) or isinstance(right, float):
            left, right = float(left), float(right)
            if op == '+':
                return left + right
            if op == '-':
                return left - right
            if op == '*':
                return left * right
            if op == '/':
                if right == 0:
                    raise RuntimeFault('division-by-zero')
                return left / right
            raise RuntimeFault('invalid-operand')
        if op == '+':
            return wrap(left + right)
        if op == '-':
            return wrap(left - right)
        if op == '*':
            return wrap(left * right)
        if right == 0:
            raise RuntimeFault('division-by-zero')
        quotient = abs(left) // abs(right)
        if (left < 0) != (right < 0):
            quotient = -quotient
        if op == '/':
            return wrap(quotient)
        return wrap(left - right * quotient)


def compare(op, left, right):
    if op == '<':
        return left < right
    if op == '<=':
        return left <= right
    if op == '>':
        return left > right
    if op == '>=':
        return left >= right
    if op == '==':
        return left == right
    return left != right


def interpret(program, stdin='', step_limit=DEFAULT_STEP_LIMIT):
    """Run main of a resolved program on stdin; never raises for faults of the program."""
    result = Interpreter(program, stdin, step_limit).run()
    if not result.ok:
        logger.debug("execution ended with %s %s after %d steps", result.status, result.error_kind, result.steps)
    return result
