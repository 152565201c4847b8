"""Line-oriented patch interchange format.

    spectre-tiles-patch 1
    coords int4-u0..u3
    meta <key> <value>
    shape <id> <name>
    tile <shape id> <rot 0..11> <reflect 0|1> <t0> <t1> <t2> <t3> [tag]
    mark <tile index> <key>=<value> ...
    hexes <mirrored 0|1> <level>
    hex <q> <r> <kind> <rot 0..5>
    sha256 <hex digest>

All fields are integers or percent-encoded words.  The digest covers the
header and the sorted record lines, so it does not depend on record order;
the record order itself is kept on a round trip.
"""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field
from urllib.parse import quote, unquote

from .geometry import Coord4, Isometry
from .tiles import Patch, PlacedTile

MAGIC = "spectre-tiles-patch"
VERSION = 1
COORDS = "int4-u0..u3"
KNOWN_SHAPES = ("tile11", "spectre", "hat", "turtle")


class PatchFormatError(ValueError):
    def __init__(self, msg: str, offset: int):
        super().__init__(f"byte {offset}: {msg}")
        self.offset = offset


@dataclass
class PatchFile:
    tiles: list[PlacedTile] = field(default_factory=list)
    markings: list[tuple[int, dict]] = field(default_factory=list)
    hexes: dict | None = None            # (q, r) -> (kind, rot)
    mirrored: bool = False
    level: int = 0
    meta: dict = field(default_factory=dict)

    @classmethod
    def from_patch(cls, patch: Patch, **meta) -> "PatchFile":
        marks = [(int(i), dict(m)) for i, m in patch.markings]
        return cls(list(patch.tiles), marks, meta={k: str(v) for k, v in meta.items()})

    @classmethod
    def from_comb(cls, comb, **meta) -> "PatchFile":
        return cls(hexes=dict(comb.nodes), mirrored=comb.mirrored, level=comb.level,
                   meta={k: str(v) for k, v in meta.items()})

    def patch(self) -> Patch:
        return Patch(list(self.tiles), list(self.markings))

    def comb(self):
        from .hexsub import CombPatch
        if self.hexes is None:
            raise ValueError("file holds no hexagon records")
        return CombPatch(dict(self.hexes), self.mirrored, self.level)


def _word(s: str) -> str:
    return quote(s, safe="")


def _records(pf: PatchFile) -> tuple[list[str], list[str]]:
    header = [f"{MAGIC} {VERSION}", f"coords {COORDS}"]
    body = []
    for k in sorted(pf.meta):
        body.append(f"meta {_word(k)} {_word(pf.meta[k])}")
    shapes = sorted({t.shape for t in pf.tiles}, key=lambda s: (KNOWN_SHAPES + (s,)).index(s))
    ids = {s: i for i, s in enumerate(shapes)}
    for s in shapes:
        body.append(f"shape {ids[s]} {_word(s)}")
    for t in pf.tiles:
        g = t.pose
        tr = " ".join(str(int(x)) for x in g.trans)
        line = f"tile {ids[t.shape]} {g.rot % 12} {int(bool(g.reflect))} {tr}"
        if t.tag:
            line += " " + _word(t.tag)
        body.append(line)
    for idx, m in pf.markings:
        fields = " ".join(f"{_word(str(k))}={_word(str(v))}" for k, v in sorted(m.items()))
        body.append(f"mark {idx} {fields}".rstrip())
    if pf.hexes is not None:
        body.append(f"hexes {int(pf.mirrored)} {pf.level}")
        for (q, r), (kind, rot) in sorted(pf.hexes.items()):
            body.append(f"hex {q} {r} {_word(kind)} {rot % 6}")
    return header, body


def content_hash(pf: PatchFile) -> str:
    header, body = _records(pf)
    h = hashlib.sha256()
    for line in header + sorted(body):
        h.update(line.encode("utf-8") + b"\n")
    return h.hexdigest()


def dumps(pf: PatchFile) -> str:
    header, body = _records(pf)
    return "\n".join(header + body + [f"sha256 {content_hash(pf)}"]) + "\n"


def write_patch(target, pf: PatchFile | Patch) -> str:
    """Write to a path or text stream; returns the content hash."""
    if isinstance(pf, Patch):
        pf = PatchFile.from_patch(pf)
    text = dumps(pf)
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        target.write(text)
    return text.rsplit(" ", 1)[1].strip()


def _int(tok: str, off: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise PatchFormatError(f"{what}: expected an integer, got {tok!r}", off) from None


def loads(text: str | bytes) -> PatchFile:
    data = text.encode("utf-8") if isinstance(text, str) else text
    pf = PatchFile()
    shapes: dict[int, str] = {}
    seen_hash = None
    header_lines: list[str] = []
    body: list[str] = []
    offset = 0
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    elif lines:
        raise PatchFormatError("truncated file (no final newline)", len(data))
    for raw in lines:
        off = offset
        offset += len(raw) + 1
        try:
            line = raw.decode("utf-8")
        except UnicodeDecodeError:
            raise PatchFormatError("not UTF-8", off) from None
        if seen_hash is not None:
            raise PatchFormatError("records after the digest line", off)
        tok = line.split()
        if not tok:
            raise PatchFormatError("empty line", off)
        if not header_lines:
            if tok[0] != MAGIC or len(tok) != 2:
                raise PatchFormatError("not a patch file", off)
            if _int(tok[1], off, "version") != VERSION:
                raise PatchFormatError(f"unsupported version {tok[1]} (expected {VERSION})", off)
            header_lines.append(line)
            continue
        if len(header_lines) == 1:
            if tok != ["coords", COORDS]:
                raise PatchFormatError("unknown coordinate convention", off)
            header_lines.append(line)
            continue
        kind = tok[0]
        if kind == "sha256":
            if len(tok) != 2:
                raise PatchFormatError("malformed digest line", off)
            seen_hash = (tok[1], off)
            continue
        body.append(line)
        if kind == "meta":
            if len(tok) != 3:
                raise PatchFormatError("meta needs a key and a value", off)
            pf.meta[unquote(tok[1])] = unquote(tok[2])
        elif kind == "shape":
            if len(tok) != 3:
                raise PatchFormatError("shape needs an id and a name", off)
            shapes[_int(tok[1], off, "shape id")] = unquote(tok[2])
        elif kind == "tile":
            if len(tok) not in (8, 9):
                raise PatchFormatError("tile record needs 7 integer fields", off)
            sid, rot, refl, *tr = (_int(x, off, "tile field") for x in tok[1:8])
            if sid not in shapes:
                raise PatchFormatError(f"undeclared shape id {sid}", off)
            if not 0 <= rot < 12 or refl not in (0, 1):
                raise PatchFormatError("rot must be 0..11 and reflect 0 or 1", off)
            tag = unquote(tok[8]) if len(tok) == 9 else ""
            pf.tiles.append(PlacedTile(shapes[sid], Isometry(rot, bool(refl), Coord4(*tr)), tag))
        elif kind == "mark":
            if len(tok) < 2:
                raise PatchFormatError("mark needs a tile index", off)
            idx = _int(tok[1], off, "mark index")
            m = {}
            for f in tok[2:]:
                if "=" not in f:
                    raise PatchFormatError(f"malformed mark field {f!r}", off)
                k, v = f.split("=", 1)
                m[unquote(k)] = unquote(v)
            pf.markings.append((idx, m))
        elif kind == "hexes":
            if len(tok) != 3:
                raise PatchFormatError("hexes needs mirrored and level", off)
            pf.hexes = {}
            pf.mirrored = bool(_int(tok[1], off, "mirrored"))
            pf.level = _int(tok[2], off, "level")
        elif kind == "hex":
            if pf.hexes is None or len(tok) != 5:
                raise PatchFormatError("malformed hex record", off)
            q, r = _int(tok[1], off, "q"), _int(tok[2], off, "r")
            pf.hexes[(q, r)] = (unquote(tok[3]), _int(tok[4], off, "rot") % 6)
        else:
            raise PatchFormatError(f"unknown record type {kind!r}", off)
    if len(header_lines) < 2:
        raise PatchFormatError("truncated header", offset)
    if seen_hash is None:
        raise PatchFormatError("truncated file (missing digest)", offset)
    h = hashlib.sha256()
    for line in header_lines + sorted(body):
        h.update(line.encode("utf-8") + b"\n")
    if h.hexdigest() != seen_hash[0]:
        raise PatchFormatError("content hash mismatch", seen_hash[1])
    return pf


def read_patch(source) -> PatchFile:
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            return loads(fh.read())
    data = source.read()
    return loads(data)


def roundtrip(pf: PatchFile) -> PatchFile:
    return loads(dumps(pf))


__all__ = ["PatchFile", "PatchFormatError", "content_hash", "dumps", "loads",
           "read_patch", "write_patch", "roundtrip"]
