"""Spec files: groups, embeddings, topologies, one instance, catalogs and maps.

Blocks look like ``kind name { key = value ... }``.  A value runs to the end
of its line or to the next ``key =`` on the same line, so short blocks fit
on one line (``group A { kind = finite-cyclic order = 4 }``) while set
descriptions with spaces sit on lines of their own.  ``#`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .amalgam import AmalgamElement, AmalgamSetup, InvariantViolation, normalize
from .groups import Embedding, GroupDesc, GroupError, cayley, cyclic, integers, symmetric3
from .topology import SUBGROUP_CHAIN, FilterBase, UnsupportedDescription
from .universal import Hom, HomPair
from .x0 import (AllAtom, Complement, OpenDescription, PointAtom, SideAtom, describe,
                 make_cell)


class SpecError(ValueError):
    rule = "spec"

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.message, self.line, self.col = message, line, col
        super().__init__(f"{self.rule} at {line}:{col}: {message}")


class SpecSyntaxError(SpecError):
    rule = "SyntaxError"


class ResolutionError(SpecError):
    rule = "ResolutionError"


class SpecInvariantViolation(SpecError):
    rule = "InvariantViolation"


BLOCK_KINDS = ("group", "embedding", "topology", "hom", "hompair", "instance", "catalog")


@dataclass
class Decl:
    kind: str
    name: str
    entries: list  # [(key, value, line, col)]
    line: int = 0
    col: int = 0

    def get(self, key: str, required: bool = True) -> Optional[str]:
        for k, v, _, _ in self.entries:
            if k == key:
                return v
        if required:
            raise SpecSyntaxError(f"{self.kind} {self.name} is missing '{key}'", self.line, self.col)
        return None

    def where(self, key: str) -> tuple[int, int]:
        for k, _, line, col in self.entries:
            if k == key:
                return line, col
        return self.line, self.col


@dataclass
class SpecFile:
    decls: list = field(default_factory=list)
    groups: dict = field(default_factory=dict)
    embeddings: dict = field(default_factory=dict)
    topologies: dict = field(default_factory=dict)
    homs: dict = field(default_factory=dict)
    hompairs: dict = field(default_factory=dict)
    instance: Optional[AmalgamSetup] = None
    catalogs: dict = field(default_factory=dict)  # name -> (version, [OpenDescription])

    def catalog(self, name: Optional[str] = None) -> list:
        if not self.catalogs:
            return []
        if name is None:
            name = next(iter(self.catalogs))
        return self.catalogs[name][1]


# -- lexing ---------------------------------------------------------------------

_HEADER = re.compile(r"\s*([A-Za-z][\w-]*)\s+([A-Za-z_][\w.-]*)\s*\{")
_KEY = re.compile(r"([A-Za-z_][\w-]*)\s*=")
_NEXT_KEY = re.compile(r"\s+[A-Za-z_][\w-]*\s*=(?!=)")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def _split_decls(text: str) -> list[Decl]:
    lines = [_strip_comment(l) for l in text.splitlines()]
    decls = []
    cur: Optional[Decl] = None
    for ln, raw in enumerate(lines, start=1):
        pos = 0
        while pos < len(raw):
            if raw[pos].isspace():
                pos += 1
                continue
            if cur is None:
                m = _HEADER.match(raw, pos)
                if not m:
                    raise SpecSyntaxError("expected 'kind name {'", ln, pos + 1)
                kind = m.group(1)
                if kind not in BLOCK_KINDS:
                    raise SpecSyntaxError(f"unknown block kind '{kind}'", ln, m.start(1) + 1)
                cur = Decl(kind, m.group(2), [], ln, m.start(1) + 1)
                pos = m.end()
                continue
            if raw[pos] == "}":
                decls.append(cur)
                cur = None
                pos += 1
                continue
            m = _KEY.match(raw, pos)
            if not m:
                raise SpecSyntaxError("expected 'key = value' or '}'", ln, pos + 1)
            key, vstart = m.group(1), m.end()
            nxt = _NEXT_KEY.search(raw, vstart)
            close = _closing_brace(raw, vstart)
            end = min(x for x in (nxt.start() if nxt else len(raw), close, len(raw)))
            value = " ".join(raw[vstart:end].split())
            if not value:
                raise SpecSyntaxError(f"empty value for '{key}'", ln, vstart + 1)
            cur.entries.append((key, value, ln, m.start() + 1))
            pos = end
    if cur is not None:
        raise SpecSyntaxError(f"block {cur.kind} {cur.name} is not closed", cur.line, cur.col)
    return decls


def _closing_brace(raw: str, start: int) -> int:
    """Position of a block-closing ``}`` (one outside any ``{...}`` or ``(...)``)."""
    depth = 0
    for i in range(start, len(raw)):
        ch = raw[i]
        if ch in "{([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        elif ch == "}":
            if depth == 0:
                return i
            depth -= 1
    return len(raw)


# -- values ---------------------------------------------------------------------

def _int(decl: Decl, key: str) -> int:
    v = decl.get(key)
    try:
        return int(v)
    except ValueError:
        raise SpecSyntaxError(f"'{key}' must be an integer, got '{v}'", *decl.where(key)) from None


def _list(v: str) -> list[str]:
    return [t.strip() for t in v.split(",") if t.strip()]


def _element(G: GroupDesc, tok: str, decl: Decl, key: str) -> int:
    try:
        return G.parse_element(tok)
    except (GroupError, ValueError) as exc:
        raise SpecSyntaxError(str(exc), *decl.where(key)) from None


def _build_group(d: Decl) -> GroupDesc:
    kind = d.get("kind")
    if kind == "finite-cyclic":
        return cyclic(_int(d, "order"), d.name)
    if kind == "infinite-cyclic":
        return integers(d.name)
    if kind == "symmetric-3":
        G = symmetric3()
        return GroupDesc(d.name, G.kind, G.order, G.table, G.labels)
    if kind == "cayley":
        rows = [r.split() for r in d.get("table").split(";")]
        labels = _list(d.get("labels", False) or "") or None
        index = {l: i for i, l in enumerate(labels)} if labels else None
        try:
            table = [[index[x] if index else int(x) for x in row] for row in rows]
            return cayley(d.name, table, labels)
        except (KeyError, ValueError, GroupError) as exc:
            raise SpecInvariantViolation(f"bad Cayley table: {exc}", *d.where("table")) from None
    raise SpecSyntaxError(f"unknown group kind '{kind}'", *d.where("kind"))


def _ref(table: dict, name: str, what: str, d: Decl, key: str):
    if name not in table:
        raise ResolutionError(f"undefined {what} '{name}'", *d.where(key))
    return table[name]


def _build_topology(d: Decl, groups: dict) -> FilterBase:
    G = _ref(groups, d.get("group"), "group", d, "group")
    kind = d.get("kind")
    try:
        if kind == "discrete":
            return FilterBase.discrete(G)
        if kind == "adic":
            start = d.get("start", False)
            return FilterBase.adic(G, _int(d, "prime"), int(start) if start else 1)
        if kind == "chain":
            chain = d.get("chain")
            if G.is_finite:
                gens = []
                for part in chain.split(">"):
                    part = part.strip()
                    if not (part.startswith("{") and part.endswith("}")):
                        raise SpecSyntaxError("finite chains list generator sets like {1} > {2}",
                                              *d.where("chain"))
                    gens.append([_element(G, t, d, "chain") for t in _list(part[1:-1])])
                return FilterBase.from_generators(G, gens)
            mods = tuple(int(x) for x in chain.replace(">", ",").split(",") if x.strip())
            ratio = d.get("ratio", False)
            return FilterBase(G, SUBGROUP_CHAIN, mods, int(ratio) if ratio else None)
    except GroupError as exc:
        raise SpecInvariantViolation(str(exc), *d.where("kind")) from None
    raise SpecSyntaxError(f"unknown topology kind '{kind}'", *d.where("kind"))


def _build_map(d: Decl, groups: dict, cls):
    src = _ref(groups, d.get("from"), "group", d, "from")
    dst = _ref(groups, d.get("to"), "group", d, "to")
    images = tuple(_element(dst, t, d, "images") for t in _list(d.get("images")))
    try:
        return cls(d.name, src, dst, images)
    except (GroupError, InvariantViolation) as exc:
        raise SpecInvariantViolation(str(exc), *d.where("images")) from None


# -- words and sets -------------------------------------------------------------

_LETTER = re.compile(r"\s*([ac])\(\s*([^()\s]+)\s*\)(\^-1)?\s*")


def parse_word(setup: AmalgamSetup, text: str, line: int = 0, col: int = 0) -> list:
    """``a(2)*c(3)^-1`` -> ``[("a", 2), ("c", -3)]``; ``e`` or ``1`` is the empty word."""
    text = text.strip()
    if text in ("e", "1", ""):
        return []
    out = []
    for part in text.split("*"):
        m = _LETTER.fullmatch(part)
        if not m:
            raise SpecSyntaxError(f"bad letter '{part.strip()}'", line, col)
        side, tok, inv = m.groups()
        G = setup.group(side)
        try:
            v = G.parse_element(tok)
        except (GroupError, ValueError) as exc:
            raise SpecSyntaxError(str(exc), line, col) from None
        out.append((side, G.inv(v) if inv else v))
    return out


def parse_element(setup: AmalgamSetup, text: str, line: int = 0, col: int = 0) -> AmalgamElement:
    return normalize(setup, parse_word(setup, text, line, col))


_FACTOR = re.compile(
    r"\[\s*([ac])\s*:\s*(?:\{\s*([^{}\s]+)\s*\}|([^\s+@\]]+)\s*"
    r"(?:\+\s*(\d+)(?:\s*\^\s*(\d+))?\s*Z|@\s*(\d+)))\s*\]")


def _parse_factor(setup: AmalgamSetup, m, line: int, col: int):
    side, point, center, mod, power, at = m.groups()
    G = setup.group(side)
    base = setup.base(side)
    tok = point if point is not None else center
    try:
        v = G.parse_element(tok)
    except (GroupError, ValueError) as exc:
        raise SpecSyntaxError(str(exc), line, col) from None
    if point is not None:
        trivial = frozenset({0}) if G.is_finite else 0
        depth = base.depth_of(trivial)
        if depth is None:
            raise SpecSyntaxError(f"{{{tok}}} needs a discrete topology on side {side}", line, col)
    elif at is not None:
        depth = int(at)
    else:
        if G.is_finite:
            raise SpecSyntaxError("finite groups use [s:{v}] or [s: v @k]", line, col)
        m_ = int(mod) ** int(power) if power else int(mod)
        depth = base.depth_of(m_)
        if depth is None:
            raise ResolutionError(f"{m_}Z is not in the topology of side {side}", line, col)
    if depth < 1:
        raise SpecSyntaxError("depths start at 1", line, col)
    return (side, v, depth)


def parse_set(setup: AmalgamSetup, text: str, line: int = 0, col: int = 0) -> OpenDescription:
    """Union of atoms joined by ``|``: cells, ``side(a)``, ``all``, ``{word}``, ``~(set)``."""
    atoms = []
    for part in _split_top(text, "|", line, col):
        p = part.strip()
        if not p:
            raise SpecSyntaxError("empty union member", line, col)
        if p == "all":
            atoms.append(AllAtom())
        elif p == "empty":
            continue
        elif re.fullmatch(r"side\(\s*[ac]\s*\)", p):
            atoms.append(SideAtom(p[p.index("(") + 1:-1].strip()))
        elif p.startswith("~(") and p.endswith(")"):
            atoms.append(Complement(parse_set(setup, p[2:-1], line, col)))
        elif p.startswith("{") and p.endswith("}"):
            atoms.append(PointAtom(parse_element(setup, p[1:-1], line, col)))
        elif p.startswith("["):
            factors, pos = [], 0
            while pos < len(p):
                if p[pos].isspace():
                    pos += 1
                    continue
                m = _FACTOR.match(p, pos)
                if not m:
                    raise SpecSyntaxError(f"bad cell factor near '{p[pos:pos + 12]}'", line, col)
                factors.append(_parse_factor(setup, m, line, col))
                pos = m.end()
            try:
                atoms.append(make_cell(setup, factors))
            except UnsupportedDescription as exc:
                raise SpecInvariantViolation(str(exc), line, col) from None
        else:
            raise SpecSyntaxError(f"unknown set atom '{p}'", line, col)
    return OpenDescription(setup, tuple(atoms))


def _split_top(text: str, sep: str, line: int, col: int) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
            if depth < 0:
                raise SpecSyntaxError("unbalanced brackets", line, col)
        if ch == sep and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SpecSyntaxError("unbalanced brackets", line, col)
    parts.append("".join(cur))
    return parts


def format_set(O: OpenDescription) -> str:
    return describe(O)


# -- whole files ----------------------------------------------------------------

def parse_spec(text: str) -> SpecFile:
    spec = SpecFile(decls=_split_decls(text))
    seen = set()
    for d in spec.decls:
        if (d.kind, d.name) in seen:
            raise SpecInvariantViolation(f"{d.kind} {d.name} defined twice", d.line, d.col)
        seen.add((d.kind, d.name))
    order = {k: i for i, k in enumerate(BLOCK_KINDS)}
    for d in sorted(spec.decls, key=lambda d: order[d.kind]):
        if d.kind == "group":
            spec.groups[d.name] = _build_group(d)
        elif d.kind == "embedding":
            e = _build_map(d, spec.groups, Embedding)
            from .groups import check_embedding
            verdict = check_embedding(e)
            if not verdict:
                raise SpecInvariantViolation(
                    f"embedding {d.name}: {verdict.reason} at {verdict.witness}", *d.where("images"))
            spec.embeddings[d.name] = e
        elif d.kind == "topology":
            spec.topologies[d.name] = _build_topology(d, spec.groups)
        elif d.kind == "hom":
            spec.homs[d.name] = _build_map(d, spec.groups, Hom)
        elif d.kind == "hompair":
            mu = _ref(spec.homs, d.get("mu"), "hom", d, "mu")
            nu = _ref(spec.homs, d.get("nu"), "hom", d, "nu")
            top = d.get("topology", False)
            base = _ref(spec.topologies, top, "topology", d, "topology") if top else None
            try:
                spec.hompairs[d.name] = HomPair(mu, nu, mu.target, base)
            except InvariantViolation as exc:
                raise SpecInvariantViolation(str(exc), d.line, d.col) from None
        elif d.kind == "instance":
            if spec.instance is not None:
                raise SpecInvariantViolation("only one instance per file", d.line, d.col)
            g = lambda k: _ref(spec.groups, d.get(k), "group", d, k)
            e = lambda k: _ref(spec.embeddings, d.get(k), "embedding", d, k)
            t = lambda k: _ref(spec.topologies, d.get(k), "topology", d, k)
            try:
                spec.instance = AmalgamSetup(d.name, g("a"), g("c"), g("b"), e("alpha"),
                                             e("gamma"), t("topology_a"), t("topology_c"))
            except (InvariantViolation, GroupError) as exc:
                raise SpecInvariantViolation(str(exc), d.line, d.col) from None
        elif d.kind == "catalog":
            if spec.instance is None:
                raise ResolutionError("catalogs need an instance", d.line, d.col)
            version = d.get("version", False) or "1"
            entries = []
            for k, v, line, col in d.entries:
                if k == "entry":
                    entries.append(parse_set(spec.instance, v, line, col))
                elif k != "version":
                    raise SpecSyntaxError(f"unknown catalog key '{k}'", line, col)
            spec.catalogs[d.name] = (version, entries)
    return spec


def _canonical_value(spec: SpecFile, d: Decl, key: str, value: str) -> str:
    if d.kind == "catalog" and key == "entry":
        return format_set(parse_set(spec.instance, value))
    if key in ("images", "labels"):
        return ", ".join(_list(value))
    if key == "table":
        return " ; ".join(" ".join(r.split()) for r in value.split(";"))
    return value


def format_spec(spec: SpecFile) -> str:
    """Canonical text: blocks in a fixed kind order, one ``key = value`` per line."""
    order = {k: i for i, k in enumerate(BLOCK_KINDS)}
    out = []
    for d in sorted(spec.decls, key=lambda d: order[d.kind]):
        out.append(f"{d.kind} {d.name} {{")
        for k, v, _, _ in d.entries:
            out.append(f"  {k} = {_canonical_value(spec, d, k, v)}")
        out.append("}")
        out.append("")
    return "\n".join(out)


def resolve_set(spec: SpecFile, text: str) -> OpenDescription:
    """``@catalog[i]`` / ``@name[i]`` references or an inline set."""
    m = re.fullmatch(r"\s*@(\w+)\[(\d+)\]\s*", text)
    if m:
        name, i = m.group(1), int(m.group(2))
        if name == "catalog":
            entries = spec.catalog()
        elif name in spec.catalogs:
            entries = spec.catalogs[name][1]
        else:
            raise ResolutionError(f"undefined catalog '{name}'")
        if i >= len(entries):
            raise ResolutionError(f"catalog has {len(entries)} entries, no [{i}]")
        return entries[i]
    if spec.instance is None:
        raise ResolutionError("no instance to interpret the set in")
    return parse_set(spec.instance, text)
