"""Versioned, byte-stable JSON encoding of ProgramGraph."""
import json

from lang.scope import Variable

from .builder import NUM_RELATIONS, ProgramGraph

FORMAT_VERSION = 1


class GraphDecodeError(ValueError):
    pass


def serialize_graph(graph):
    payload = {
        'version': FORMAT_VERSION,
        'nodes': list(graph.nodes),
        'edges': [list(edge) for edge in graph.edges],
        'var_nodes': list(graph.var_nodes),
        'variables': [
            [v.decl, v.name, v.function, v.type, v.key] for v in graph.variables
        ],
    }
    return json.dumps(payload, sort_keys=True, separators=(',', ':')).encode('utf-8')


def deserialize_graph(data):
    try:
        payload = json.loads(data)
    except (TypeError, UnicodeDecodeError, json.JSONDecodeError) as e:
        raise GraphDecodeError(f"not a graph payload: {e}") from e
    if not isinstance(payload, dict):
        raise GraphDecodeError("graph payload must be a JSON object")
    if payload.get('version') != FORMAT_VERSION:
        raise GraphDecodeError(f"unsupported graph format version {payload.get('version')!r}")
    try:
        nodes = tuple(int(kind) for kind in payload['nodes'])
        edges = tuple((int(src), int(dst), int(rel)) for src, dst, rel in payload['edges'])
        var_nodes = tuple(int(index) for index in payload['var_nodes'])
        found = tuple(Variable(int(d), str(name), str(fn), str(t), str(key)) for d, name, fn, t, key in payload['variables'])
    except (KeyError, TypeError, ValueError) as e:
        raise GraphDecodeError(f"malformed graph payload: {e}") from e
    for src, dst, rel in edges:
        if not (0 <= src < len(nodes) and 0 <= dst < len(nodes) and 0 <= rel < NUM_RELATIONS):
            raise GraphDecodeError(f"edge ({src}, {dst}, {rel}) is out of range")
    if any(not 0 <= index < len(nodes) for index in var_nodes) or len(found) not in (0, len(var_nodes)):
        raise GraphDecodeError("variable nodes do not match the node list")
    return ProgramGraph(nodes, edges, var_nodes, found)
