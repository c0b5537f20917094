import re
from dataclasses import dataclass

from .exceptions import ParseError

KEYWORDS = {
    'int', 'float', 'double', 'void', 'if', 'else', 'for', 'while', 'return', 'break', 'continue',
}

ESCAPES = {'n': '\n', 't': '\t', '\\': '\\', '"': '"', "'": "'", '0': '\0', 'r': '\r'}

TOKEN_SPEC = [
    ('DIRECTIVE', r'\#[^\n]*'),  # include lines are accepted and ignored
    ('COMMENT', r'//[^\n]*|/\*[\s\S]*?\*/'),
    ('NEWLINE', r'\n'),
    ('SKIP', r'[ \t\r\f\v]+'),
    ('FLOAT', r'(?:\d+\.\d*|\.\d+)(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+'),
    ('INT', r'\d+'),
    ('STRING', r'"(?:[^"\\\n]|\\.)*"'),
    ('NAME', r'[A-Za-z_]\w*'),
    ('OP', r'\+\+|--|\+=|-=|\*=|/=|%=|<=|>=|==|!=|&&|\|\||[-+*/%<>=!&(){},;]'),
    ('MISMATCH', r'.'),
]
MASTER = re.compile('|'.join(f'(?P<{name}>{pattern})' for name, pattern in TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str  # KEYWORD, NAME, INT, FLOAT, STRING, OP, EOF
    value: object
    line: int
    col: int


def decode_string(literal, line, col):
    out = []
    i = 1
    while i < len(literal) - 1:
        ch = literal[i]
        if ch == '\\':
            nxt = literal[i + 1]
            if nxt not in ESCAPES:
                raise ParseError(f"unknown escape sequence '\\{nxt}'", line, col + i)
            out.append(ESCAPES[nxt])
            i += 2
        else:
            out.append(ch)
            i += 1
    return ''.join(out)


def tokenize(source):
    tokens = []
    line = 1
    line_start = 0
    for match in MASTER.finditer(source):
        kind = match.lastgroup
        text = match.group()
        col = match.start() - line_start + 1
        if kind == 'NEWLINE':
            line += 1
            line_start = match.end()
            continue
        if kind in ('SKIP', 'DIRECTIVE'):
            continue
        if kind == 'COMMENT':
            newlines = text.count('\n')
            if newlines:
                line += newlines
                line_start = match.start() + text.rindex('\n') + 1
            continue
        if kind == 'MISMATCH':
            raise ParseError(f"unexpected character {text!r}", line, col)
        if kind == 'NAME' and text in KEYWORDS:
            tokens.append(Token('KEYWORD', text, line, col))
        elif kind == 'INT':
            tokens.append(Token('INT', int(text), line, col))
        elif kind == 'FLOAT':
            tokens.append(Token('FLOAT', float(text), line, col))
        elif kind == 'STRING':
            tokens.append(Token('STRING', decode_string(text, line, col), line, col))
        else:
            tokens.append(Token(kind, text, line, col))
    tokens.append(Token('EOF', None, line, len(source) - line_start + 1))
    return tokens
