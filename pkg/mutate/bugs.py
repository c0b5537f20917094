"""
Bug injection: wrong comparison operator (WCO), variable misuse (VM) and missing
expression (ME).

Every injector enumerates one candidate per site; `inject` keeps only candidates that fail
the suite. Injections never add or remove declarations, so a buggy program declares the same
variables in the same order as the program it was made from. Deleting the init or update
clause of a for-loop rewrites that loop as a while loop first.
"""
import dataclasses
import logging
import random
from collections import Counter
from dataclasses import dataclass

from lang import nodes as n
from lang.edits import SiteEditor, edit_site, find_sites, is_comparison, read_sites, replace_read
from lang.exceptions import LangError, ScopeError
from lang.interpreter import DEFAULT_STEP_LIMIT
from lang.parser import parse
from lang.printer import pretty_print
from lang.rename import rename_variables
from lang.scope import resolve, variables
from lang.suites import run_test_suite

from .transforms import hoisted, loop_as_while

logger = logging.getLogger(__name__)

WCO = 'wco'
VM = 'vm'
ME = 'me'
BUG_TYPES = (WCO, VM, ME)


@dataclass(frozen=True)
class Bug:
    type: str
    site: int
    description: str


@dataclass(frozen=True)
class BuggyPair:
    correct: n.Program
    buggy: n.Program
    mapping: tuple  # (buggy Variable, correct Variable) in buggy declaration order
    bug: Bug
    config_id: int = 0

    def mapping_dict(self):
        return {b.key: c.key for b, c in self.mapping}


def wco_candidates(program, rng=None):
    for index, site in enumerate(find_sites(program, is_comparison)):
        others = [op for op in n.COMPARISON_OPS if op != site.op]
        op = rng.choice(others) if rng else others[0]
        buggy = edit_site(program, is_comparison, index, lambda node: dataclasses.replace(node, op=op))
        yield resolve(buggy), Bug(WCO, index, f'{site.op} -> {op}')


def vm_candidates(program, rng=None):
    types = {v.decl: v.type for v in variables(program)}
    names = sorted({v.name for v in variables(program)})
    for index, var in enumerate(read_sites(program)):
        choices = [name for name in names if name != var.name]
        if rng:
            rng.shuffle(choices)
        for name in choices:
            try:
                buggy = resolve(replace_read(program, index, name))
            except ScopeError:
                continue
            if types[read_sites(buggy)[index].decl] != types[var.decl]:
                continue
            yield buggy, Bug(VM, index, f'{var.name} -> {name}')
            break


def removable(node):
    if isinstance(node, n.Declarator):
        return node.init is not None
    return isinstance(node, (n.ExprStmt, n.Assign))


def remove(node):
    if isinstance(node, n.Declarator):
        return dataclasses.replace(node, init=None)
    return None


class StatementSiteEditor(SiteEditor):
    """Leaves the init and update clauses of for-loops alone."""

    def visit_For(self, node):
        body = self.visit(node.body)
        return node if body is node.body else dataclasses.replace(node, body=body)


def is_for(node):
    return isinstance(node, n.For)


def clause_deletions(loop):
    """
    (description, replacement) for deleting one init or update clause of a for-loop. The
    loop is first rewritten as a while loop so the clause becomes a statement of its own;
    loops that cannot be rewritten give nothing.
    """
    if loop.update is not None:
        without_update = loop_as_while(loop, update=False)
        if without_update is not None:
            yield pretty_print(loop.update).strip(), hoisted(loop.init, without_update)
    if loop.init is None:
        return
    rewritten = loop_as_while(loop)
    if rewritten is None:
        return
    if not isinstance(loop.init, n.Declaration):
        yield pretty_print(loop.init).strip(), rewritten
        return
    declarators = loop.init.declarators
    for index, declarator in enumerate(declarators):
        if declarator.init is None:
            continue
        kept = declarators[:index] + (remove(declarator),) + declarators[index + 1:]
        yield f'{declarator.name} = ...', hoisted(dataclasses.replace(loop.init, declarators=kept), rewritten)


def deletions(program):
    for index, site in enumerate(find_sites(program, removable, StatementSiteEditor)):
        what = f'{site.name} = ...' if isinstance(site, n.Declarator) else pretty_print(site).strip()
        yield what, edit_site(program, removable, index, remove, StatementSiteEditor)
    for index, loop in enumerate(find_sites(program, is_for)):
        for what, replacement in clause_deletions(loop):
            yield what, edit_site(program, is_for, index, lambda node, r=replacement: r)


def me_candidates(program, rng=None):
    for site, (what, buggy) in enumerate(deletions(program)):
        try:
            # a deletion must leave a program that still prints and parses
            buggy = parse(pretty_print(buggy))
        except LangError:
            continue
        yield buggy, Bug(ME, site, f'removed {what}')


CANDIDATES = {WCO: wco_candidates, VM: vm_candidates, ME: me_candidates}


def inject(program, suite, bug_type, rng=None, step_limit=DEFAULT_STEP_LIMIT, limit=None):
    """Failing candidates of one bug type; with an rng the sites are tried in random order."""
    candidates = list(CANDIDATES[bug_type](program, rng))
    if rng:
        rng.shuffle(candidates)
    failing = []
    for buggy, bug in candidates:
        if limit is not None and len(failing) >= limit:
            break
        if run_test_suite(buggy, suite, step_limit).all_passed:
            logger.debug("discarding %s candidate %s: suite still passes", bug_type, bug.description)
            continue
        failing.append((buggy, bug))
    return failing


def inject_wco(program, suite, seed=0, step_limit=DEFAULT_STEP_LIMIT):
    return inject(program, suite, WCO, random.Random(seed), step_limit)


def inject_vm(program, suite, seed=0, step_limit=DEFAULT_STEP_LIMIT):
    return inject(program, suite, VM, random.Random(seed), step_limit)


def inject_me(program, suite, seed=0, step_limit=DEFAULT_STEP_LIMIT):
    return inject(program, suite, ME, random.Random(seed), step_limit)


def ranked_variables(program):
    """(function, name, k) -> Variable, where k counts declarations of that name in that function."""
    seen = Counter()
    ranked = {}
    for var in variables(program):
        seen[(var.function, var.name)] += 1
        ranked[(var.function, var.name, seen[(var.function, var.name)])] = var
    return ranked


def ground_truth(buggy, correct):
    """
    Mapping between a program and a mutated, bug-injected copy of it, matching variables by
    function, name and declaration rank; checked by renaming.
    """
    buggy_ranked, correct_ranked = ranked_variables(buggy), ranked_variables(correct)
    if buggy_ranked.keys() != correct_ranked.keys():
        raise ValueError("programs do not declare the same variables")
    mapping = tuple(sorted(
        ((buggy_ranked[key], correct_ranked[key]) for key in buggy_ranked),
        key=lambda pair: pair[0].decl,
    ))
    renamed = rename_variables(buggy, mapping)
    if [v.name for v in variables(renamed)] != [c.name for _, c in mapping]:
        raise AssertionError("ground-truth mapping does not rename the buggy program onto the correct one")
    return mapping


FRESH_NAMES = tuple('abcdefghkmpqrstuvwxyz') + tuple(f'v{i}' for i in range(100))


def rename_randomly(program, mapping, rng):
    """Bijectively rename every variable name of program; returns (renamed, updated mapping)."""
    names = sorted({v.name for v in variables(program)})
    fresh = rng.sample(FRESH_NAMES, len(names))
    table = dict(zip(names, fresh))
    renamed = rename_variables(program, [(v, table[v.name]) for v in variables(program)])
    renamed_vars = variables(renamed)
    by_decl = {v.decl: renamed_vars[i] for i, v in enumerate(variables(program))}
    return renamed, tuple((by_decl[b.decl], c) for b, c in mapping)


def make_pair(correct, buggy, bug, config_id=0, rename_rng=None):
    mapping = ground_truth(buggy, correct)
    if rename_rng is not None:
        buggy, mapping = rename_randomly(buggy, mapping, rename_rng)
    return BuggyPair(correct=correct, buggy=buggy, mapping=mapping, bug=bug, config_id=config_id)
