"""
SHA-256 fingerprints of graphs and artifact files.
Used in generation manifests so a benchmark can prove it ran on the exact
graphs that were sampled.
"""

from cryptography.hazmat.primitives import hashes

from .netgraph import NetworkGraph

_CHUNK = 1 << 16


def bytes_fingerprint(data: bytes) -> str:
    """Calculate the SHA256 fingerprint of raw bytes."""
    digest = hashes.Hash(hashes.SHA256())
    digest.update(data)
    return digest.finalize().hex()


def file_fingerprint(path: str) -> str:
    """Calculate the SHA256 fingerprint of a file's contents."""
    digest = hashes.Hash(hashes.SHA256())
    with open(path, "rb") as f:
        while True:
            chunk = f.read(_CHUNK)
            if not chunk:
                break
            digest.update(chunk)
    return digest.finalize().hex()


def graph_fingerprint(g: NetworkGraph) -> str:
    """Fingerprint of a graph's canonical edge list, independent of file layout."""
    digest = hashes.Hash(hashes.SHA256())
    for v in g.vertices:
        digest.update(f"v {v}\n".encode())
    for u, v, w in g.edge_list:
        digest.update(f"e {u} {v} {w}\n".encode())
    for v, dims in sorted(g.free_indices.items()):
        digest.update(f"f {v} {' '.join(map(str, dims))}\n".encode())
    return digest.finalize().hex()
