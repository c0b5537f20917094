"""
Parameter checkpoints.

Layout: the 8-byte magic, a little-endian uint32 header length, a JSON header (sorted
keys) and then every parameter's raw little-endian float64 values in header order. The
header embeds the node vocabulary and edge-set mask the parameters were trained with so
inference can refuse an incompatible checkpoint. Equal inputs give identical bytes.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)

MAGIC = b'VMAPCKPT'
VERSION = 1


class CheckpointError(ValueError):
    pass


@dataclass
class Checkpoint:
    params: dict
    vocab: tuple
    edges: str
    hidden_dim: int
    meta: dict = field(default_factory=dict)


def dumps_checkpoint(checkpoint):
    names = sorted(checkpoint.params)
    header = {
        'version': VERSION,
        'vocab': list(checkpoint.vocab),
        'edges': checkpoint.edges,
        'hidden_dim': checkpoint.hidden_dim,
        'params': [[name, list(checkpoint.params[name].shape)] for name in names],
        'meta': checkpoint.meta,
    }
    header_bytes = json.dumps(header, sort_keys=True, separators=(',', ':')).encode('utf-8')
    body = b''.join(np.ascontiguousarray(checkpoint.params[name], dtype='<f8').tobytes() for name in names)
    return MAGIC + len(header_bytes).to_bytes(4, 'little') + header_bytes + body


def loads_checkpoint(data, vocab=None, edges=None):
    if not data.startswith(MAGIC) or len(data) < len(MAGIC) + 4:
        raise CheckpointError("not a checkpoint file")
    offset = len(MAGIC) + 4
    header_length = int.from_bytes(data[len(MAGIC):offset], 'little')
    try:
        header = json.loads(data[offset:offset + header_length])
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise CheckpointError(f"corrupt checkpoint header: {e}") from e
    if header.get('version') != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {header.get('version')!r}")
    if vocab is not None and tuple(header['vocab']) != tuple(vocab):
        raise CheckpointError("checkpoint was trained with a different node vocabulary")
    if edges is not None and header['edges'] != edges:
        raise CheckpointError(f"checkpoint uses edge set {header['edges']!r}, expected {edges!r}")
    offset += header_length
    params = {}
    for name, shape in header['params']:
        count = int(np.prod(shape, dtype=np.int64))
        chunk = data[offset:offset + 8 * count]
        if len(chunk) != 8 * count:
            raise CheckpointError(f"checkpoint is truncated at parameter {name!r}")
        params[name] = np.frombuffer(chunk, dtype='<f8').astype(np.float64).reshape(shape)
        offset += 8 * count
    if offset != len(data):
        raise CheckpointError("trailing bytes after the last parameter")
    return Checkpoint(params, tuple(header['vocab']), header['edges'], header['hidden_dim'], header.get('meta', {}))


def save_checkpoint(checkpoint, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dumps_checkpoint(checkpoint))
    logger.info("saved checkpoint with %d parameters to %s", len(checkpoint.params), path)


def load_checkpoint(path, vocab=None, edges=None):
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"no checkpoint at {path}")
    return loads_checkpoint(path.read_bytes(), vocab=vocab, edges=edges)
