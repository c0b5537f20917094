"""
Recursive-descent parser for the mini-C subset.

Grammar (informal):

    program     := function*
    function    := type NAME '(' params ')' block
    statement   := block | declaration ';' | if | while | for | return ';'
                 | 'break' ';' | 'continue' ';' | scanf ';' | printf ';' | simple ';' | ';'
    simple      := NAME assign-op expr | expr
    expr        := binary expression over || && == != < <= > >= + - * / %
                   with unary - ! ++ -- and postfix ++ --

Bodies of if/while/for that are single statements are wrapped in a Block, and
`else if` is an else Block holding a single If, so printing always emits braces.
"""
from . import nodes as n
from .exceptions import ParseError
from .lexer import tokenize
from .scope import resolve

TYPE_KEYWORDS = {'int': n.INT, 'float': n.FLOAT, 'double': n.FLOAT, 'void': n.VOID}


def parse(source):
    """Parse and scope-check a mini-C program."""
    return resolve(Parser(tokenize(source)).program())


def parse_statement(source):
    """Parse a single statement (no scope check); used for repair snippets and tests."""
    parser = Parser(tokenize(source))
    stmt = parser.statement()
    parser.expect('EOF')
    return stmt


def parse_expression(source):
    parser = Parser(tokenize(source))
    expr = parser.expression()
    parser.expect('EOF')
    return expr


class Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    # Token helpers

    @property
    def current(self):
        return self.tokens[self.pos]

    def peek(self, offset=1):
        index = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[index]

    def check(self, kind, value=None):
        tok = self.current
        return tok.kind == kind and (value is None or tok.value == value)

    def accept(self, kind, value=None):
        if self.check(kind, value):
            tok = self.current
            self.pos += 1
            return tok
        return None

    def expect(self, kind, value=None):
        tok = self.accept(kind, value)
        if tok is None:
            wanted = value if value is not None else kind
            found = self.current.value if self.current.kind != 'EOF' else 'end of input'
            raise ParseError(f"expected {wanted!r}, found {found!r}", self.current.line, self.current.col)
        return tok

    def error(self, message):
        return ParseError(message, self.current.line, self.current.col)

    # Top level

    def program(self):
        functions = []
        while not self.check('EOF'):
            functions.append(self.function())
        return n.Program(tuple(functions))

    def type_name(self):
        tok = self.current
        if tok.kind == 'KEYWORD' and tok.value in TYPE_KEYWORDS:
            self.pos += 1
            return TYPE_KEYWORDS[tok.value]
        raise self.error(f"expected a type, found {tok.value!r}")

    def function(self):
        return_type = self.type_name()
        name = self.expect('NAME').value
        self.expect('OP', '(')
        params = []
        if self.check('KEYWORD', 'void') and self.peek().kind == 'OP' and self.peek().value == ')':
            self.pos += 1
        elif not self.check('OP', ')'):
            while True:
                param_type = self.type_name()
                if param_type == n.VOID:
                    raise self.error("parameters cannot have type void")
                params.append(n.Param(param_type, self.expect('NAME').value))
                if not self.accept('OP', ','):
                    break
        self.expect('OP', ')')
        return n.FunctionDef(return_type, name, tuple(params), self.block())

    # Statements

    def block(self):
        self.expect('OP', '{')
        statements = []
        while not self.accept('OP', '}'):
            if self.check('EOF'):
                raise self.error("unterminated block")
            stmt = self.statement()
            if stmt is not None:
                statements.append(stmt)
        return n.Block(tuple(statements))

    def body(self):
        stmt = self.statement()
        if isinstance(stmt, n.Block):
            return stmt
        return n.Block(() if stmt is None else (stmt,))

    def statement(self):
        tok = self.current
        if tok.kind == 'OP' and tok.value == '{':
            return self.block()
        if tok.kind == 'OP' and tok.value == ';':
            self.pos += 1
            return None
        if tok.kind == 'KEYWORD':
            if tok.value in TYPE_KEYWORDS:
                decl = self.declaration()
                self.expect('OP', ';')
                return decl
            handler = getattr(self, f'{tok.value}_statement', None)
            if handler is None:
                raise self.error(f"unexpected keyword {tok.value!r}")
            self.pos += 1
            return handler()
        if tok.kind == 'NAME' and tok.value in ('scanf', 'printf') and self.peek().value == '(':
            self.pos += 1
            stmt = self.scanf() if tok.value == 'scanf' else self.printf()
            self.expect('OP', ';')
            return stmt
        stmt = self.simple()
        self.expect('OP', ';')
        return stmt

    def declaration(self):
        var_type = self.type_name()
        if var_type == n.VOID:
            raise self.error("variables cannot have type void")
        declarators = []
        while True:
            name = self.expect('NAME').value
            init = self.expression() if self.accept('OP', '=') else None
            declarators.append(n.Declarator(name, init))
            if not self.accept('OP', ','):
                break
        return n.Declaration(var_type, tuple(declarators))

    def simple(self):
        tok = self.current
        nxt = self.peek()
        if tok.kind == 'NAME' and nxt.kind == 'OP' and nxt.value in n.ASSIGN_OPS:
            self.pos += 2
            return n.Assign(n.Var(tok.value), nxt.value, self.expression())
        return n.ExprStmt(self.expression())

    def if_statement(self):
        self.expect('OP', '(')
        cond = self.expression()
        self.expect('OP', ')')
        then = self.body()
        orelse = None
        if self.accept('KEYWORD', 'else'):
            orelse = self.body()
        return n.If(cond, then, orelse)

    def while_statement(self):
        self.expect('OP', '(')
        cond = self.expression()
        self.expect('OP', ')')
        return n.While(cond, self.body())

    def for_statement(self):
        self.expect('OP', '(')
        init = None
        if not self.check('OP', ';'):
            if self.current.kind == 'KEYWORD' and self.current.value in TYPE_KEYWORDS:
                init = self.declaration()
            else:
                init = self.simple()
        self.expect('OP', ';')
        cond = None if self.check('OP', ';') else self.expression()
        self.expect('OP', ';')
        update = None if self.check('OP', ')') else self.simple()
        self.expect('OP', ')')
        return n.For(init, cond, update, self.body())

    def return_statement(self):
        value = None if self.check('OP', ';') else self.expression()
        self.expect('OP', ';')
        return n.Return(value)

    def break_statement(self):
        self.expect('OP', ';')
        return n.Break()

    def continue_statement(self):
        self.expect('OP', ';')
        return n.Continue()

    def scanf(self):
        self.expect('OP', '(')
        fmt = self.expect('STRING').value
        targets = []
        while self.accept('OP', ','):
            self.accept('OP', '&')
            targets.append(n.Var(self.expect('NAME').value))
        self.expect('OP', ')')
        return n.Scanf(fmt, tuple(targets))

    def printf(self):
        self.expect('OP', '(')
        fmt = self.expect('STRING').value
        args = []
        while self.accept('OP', ','):
            args.append(self.expression())
        self.expect('OP', ')')
        return n.Printf(fmt, tuple(args))

    # Expressions

    def expression(self, min_precedence=1):
        left = self.unary()
        while True:
            tok = self.current
            precedence = n.BINARY_PRECEDENCE.get(tok.value) if tok.kind == 'OP' else None
            if precedence is None or precedence < min_precedence:
                return left
            self.pos += 1
            right = self.expression(precedence + 1)
            left = n.Binary(tok.value, left, right)

    def unary(self):
        tok = self.current
        if tok.kind == 'OP':
            if tok.value in n.UNARY_OPS:
                self.pos += 1
                return n.Unary(tok.value, self.unary())
            if tok.value == '+':
                self.pos += 1
                return self.unary()
            if tok.value in n.INCDEC_OPS:
                self.pos += 1
                return n.IncDec(tok.value, True, n.Var(self.expect('NAME').value))
        return self.postfix()

    def postfix(self):
        tok = self.current
        if tok.kind == 'NAME':
            self.pos += 1
            if self.accept('OP', '('):
                args = []
                if not self.check('OP', ')'):
                    while True:
                        args.append(self.expression())
                        if not self.accept('OP', ','):
                            break
                self.expect('OP', ')')
                return n.Call(tok.value, tuple(args))
            var = n.Var(tok.value)
            if self.current.kind == 'OP' and self.current.value in n.INCDEC_OPS:
                op = self.current.value
                self.pos += 1
                return n.IncDec(op, False, var)
            return var
        return self.primary()

    def primary(self):
        tok = self.current
        if tok.kind == 'INT':
            self.pos += 1
            return n.IntLit(tok.value)
        if tok.kind == 'FLOAT':
            self.pos += 1
            return n.FloatLit(tok.value)
        if self.accept('OP', '('):
            expr = self.expression()
            self.expect('OP', ')')
            return expr
        found = tok.value if tok.kind != 'EOF' else 'end of input'
        raise self.error(f"expected an expression, found {found!r}")
