import hashlib

def calculate_table_hash(kind: str, rows) -> str:
    """SHA-256 of a structure's tables; names are presentation-only and left out."""
    payload = kind + "|" + ";".join(",".join(str(v) for v in row) for row in rows)
    return hashlib.sha256(payload.encode()).hexdigest()

def semilattice_fingerprint(s) -> str:
    return calculate_table_hash(f"semilattice{s.size}", s.join)

def short_id(fingerprint: str) -> str:
    return fingerprint[:12]
