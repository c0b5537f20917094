"""
Point edits on a tree: find the nodes matching a predicate and rewrite the k-th one.

Sites are numbered in the post-order a NodeTransformer visits them, so counting and editing
walk the tree identically. ReadSiteEditor only looks at variable reads (not the target of
an assignment, increment or scanf).
"""
import dataclasses

from . import nodes as n


class SiteEditor(n.NodeTransformer):
    def __init__(self, matches, edit=None, index=-1):
        self.matches = matches
        self.edit = edit
        self.index = index
        self.found = []

    def visit(self, node):
        result = super().visit(node)
        if isinstance(result, n.Node) and self.matches(result):
            position = len(self.found)
            self.found.append(result)
            if position == self.index:
                return self.edit(result)
        return result


class ReadSiteEditor(SiteEditor):
    def visit_Assign(self, node):
        value = self.visit(node.value)
        return node if value is node.value else dataclasses.replace(node, value=value)

    def visit_IncDec(self, node):
        return node

    def visit_Scanf(self, node):
        return node


def find_sites(tree, matches, editor=SiteEditor):
    finder = editor(matches)
    finder.visit(tree)
    return finder.found


def edit_site(tree, matches, index, edit, editor=SiteEditor):
    """Return tree with edit(node) in place of the index-th matching node."""
    return editor(matches, edit, index).visit(tree)


def is_var(node):
    return isinstance(node, n.Var)


def is_comparison(node):
    return isinstance(node, n.Binary) and node.is_comparison


def read_sites(tree):
    return find_sites(tree, is_var, ReadSiteEditor)


def replace_read(tree, index, name):
    return edit_site(tree, is_var, index, lambda var: n.Var(name), ReadSiteEditor)
