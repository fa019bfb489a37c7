"""Line-oriented text formats for systems, posets and mappings; DOT export;
the on-disk exponent cache."""
from __future__ import annotations

import re
from pathlib import Path

from .approx import ApproxMapping, make_mapping
from .core import ConsPair, InfoSystem, build_system, fmt_set, pair_key, set_key, tok_key
from .errors import ParseError
from .function_space import CPT, Exponent, ExpToken, cpt_key, exp_key
from .posets import FinitePoset, make_poset
from .states import StatePoset, hasse_edges, state_label

TOKEN = r"[A-Za-z0-9_'.\[\]]+"
TOKEN_RE = re.compile(rf"^{TOKEN}$")
PAIR_RE = re.compile(rf"^\(\s*({TOKEN})\s*;\s*([^)]*)\)\s*->\s*(.*)$")


def _lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield n, raw, line


def _col(raw: str, frag: str) -> int:
    """1-based column of ``frag``, searched after the leading directive word."""
    body = raw.lstrip()
    start = len(raw) - len(body) + len(body.split(" ", 1)[0])
    k = raw.find(frag, start)
    if k < 0:
        k = raw.find(frag)
    return k + 1 if k >= 0 else 1


def _tok(word: str, n: int, raw: str, known=None) -> str:
    if not TOKEN_RE.match(word):
        raise ParseError(f"bad token {word!r}", n, _col(raw, word))
    if known is not None and word not in known:
        raise ParseError(f"token {word!r} used before declaration", n, _col(raw, word))
    return word


def _tok_list(body: str, n, raw, known) -> frozenset:
    body = body.strip()
    if not body:
        return frozenset()
    return frozenset(_tok(w.strip(), n, raw, known) for w in body.split(","))


# ---------------------------------------------------------------------------
# systems


def parse_system(text: str) -> InfoSystem:
    name, delta, tokens = None, None, None
    delta_at = None
    con, ent = [], {}
    for n, raw, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        if head == "system":
            if not rest:
                raise ParseError("missing system name", n, 1)
            name = rest
        elif head == "delta":
            delta, delta_at = rest, (n, _col(raw, rest))
            if tokens is not None:
                _tok(rest, n, raw, tokens)
        elif head == "tokens":
            if tokens is not None:
                raise ParseError("duplicate tokens line", n, 1)
            words = rest.split()
            if not words:
                raise ParseError("empty token list", n, 1)
            tokens = [_tok(w, n, raw) for w in words]
            if len(set(tokens)) != len(tokens):
                raise ParseError("duplicate token", n, 1)
            tokens = set(tokens)
            if delta is not None and delta not in tokens:
                raise ParseError(f"token {delta!r} used before declaration", *delta_at)
        elif head == "con":
            if tokens is None:
                raise ParseError("con before tokens", n, 1)
            w, sep, sets = rest.partition(":")
            if not sep:
                raise ParseError("expected ':' after witness", n, len(line))
            w = _tok(w.strip(), n, raw, tokens)
            body = sets.strip()
            for m in re.finditer(r"\{([^}]*)\}|(\S)", body):
                if m.group(2) is not None:
                    raise ParseError(f"unexpected {m.group(2)!r}", n, _col(raw, m.group(0)))
                con.append((w, _tok_list(m.group(1), n, raw, tokens)))
        elif head == "entail":
            if tokens is None:
                raise ParseError("entail before tokens", n, 1)
            m = PAIR_RE.match(rest)
            if not m:
                raise ParseError("expected '(TOK ; TOK,...) -> TOK+'", n, _col(raw, rest))
            w = _tok(m.group(1), n, raw, tokens)
            xs = _tok_list(m.group(2), n, raw, tokens)
            rhs = m.group(3).split()
            if not rhs:
                raise ParseError("empty right-hand side", n, len(line))
            key = (w, xs)
            if key in ent:
                raise ParseError("duplicate entail line", n, 1)
            ent[key] = frozenset(_tok(t, n, raw, tokens) for t in rhs)
        else:
            raise ParseError(f"unknown directive {head!r}", n, _col(raw, head))
    if name is None or delta is None or tokens is None:
        raise ParseError("missing system, delta or tokens line", 0, 0)
    return build_system(tokens, delta, con, ent, name)


def serialize_system(sys: InfoSystem) -> str:
    out = [f"system {sys.name}", f"delta {sys.delta}", "tokens " + " ".join(sys.tokens)]
    for t in sys.tokens:
        sets = sorted(sys.con_of[t], key=set_key)
        if sets:
            out.append(f"con {t} : " + " ".join(fmt_set(s) for s in sets))
    for p in sys.pairs:
        e = sorted(sys.entail[p], key=tok_key)
        if e:
            out.append(f"entail ({p.witness} ; {','.join(sorted(p.set, key=tok_key))}) -> {' '.join(e)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# posets


def parse_poset(text: str) -> FinitePoset:
    name, bottom, elems, pairs = None, None, None, []
    for n, raw, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        rest = rest.strip()
        if head == "poset":
            name = rest
        elif head == "bottom":
            bottom = (rest, n, raw)
        elif head == "elems":
            elems = [_tok(w, n, raw) for w in rest.split()]
        elif head == "le":
            if elems is None:
                raise ParseError("le before elems", n, 1)
            ws = rest.split()
            if len(ws) != 2:
                raise ParseError("expected 'le TOK TOK'", n, 1)
            pairs.append(tuple(_tok(w, n, raw, set(elems)) for w in ws))
        else:
            raise ParseError(f"unknown directive {head!r}", n, _col(raw, head))
    if name is None or elems is None or bottom is None:
        raise ParseError("missing poset, bottom or elems line", 0, 0)
    b, n, raw = bottom
    _tok(b, n, raw, set(elems))
    try:
        p = make_poset(elems, pairs + [(b, e) for e in elems], b, name)
    except ValueError as e:
        raise ParseError(str(e), 0, 0) from None
    return p


def serialize_poset(p: FinitePoset) -> str:
    out = [f"poset {p.name}", f"bottom {p.bottom}", "elems " + " ".join(p.elems)]
    for x, y in sorted(p.leq, key=lambda e: (p.elems.index(e[0]), p.elems.index(e[1]))):
        if x != y and x != p.bottom:
            out.append(f"le {x} {y}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# mappings


def parse_mapping_header(text: str):
    for n, raw, line in _lines(text):
        m = re.match(r"^\s*map\s+(\S+)\s*:\s*(\S+)\s*->\s*(\S+)\s*$", line)
        if not m:
            raise ParseError("expected 'map NAME : SRC -> DST'", n, 1)
        return m.group(1), m.group(2), m.group(3)
    raise ParseError("empty mapping file", 0, 0)


def parse_mapping(text: str, source: InfoSystem, target: InfoSystem) -> ApproxMapping:
    name, rel = None, {}
    for n, raw, line in _lines(text):
        head, _, rest = line.strip().partition(" ")
        if head == "map":
            name, _, _ = parse_mapping_header(line)
        elif head == "rel":
            m = PAIR_RE.match(rest.strip())
            if not m:
                raise ParseError("expected 'rel (TOK ; TOK,...) -> TOK+'", n, 1)
            w = _tok(m.group(1), n, raw, source.token_set)
            xs = _tok_list(m.group(2), n, raw, source.token_set)
            rhs = m.group(3).split()
            if not rhs:
                raise ParseError("empty right-hand side", n, len(line))
            key = ConsPair(w, xs)
            if key not in source.con:
                raise ParseError(f"{key!r} is not consistent in {source.name}", n, 1)
            rel[key] = rel.get(key, frozenset()) | {_tok(t, n, raw, target.token_set) for t in rhs}
        else:
            raise ParseError(f"unknown directive {head!r}", n, _col(raw, head))
    if name is None:
        raise ParseError("missing map line", 0, 0)
    return make_mapping(source, target, rel, name)


def serialize_mapping(h: ApproxMapping) -> str:
    out = [f"map {h.name} : {h.source.name} -> {h.target.name}"]
    for p in sorted(h.rel, key=pair_key):
        im = sorted(h.rel[p], key=tok_key)
        if im:
            out.append(f"rel ({p.witness} ; {','.join(sorted(p.set, key=tok_key))}) -> {' '.join(im)}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# DOT


def export_dot(sp: StatePoset) -> str:
    """Hasse diagram of the state poset."""
    ids = {s: f"s{n}" for n, s in enumerate(sp.states)}
    out = [f'digraph "{sp.sys.name}" {{', "  rankdir=BT;"]
    for s in sp.states:
        out.append(f'  {ids[s]} [label="{state_label(s)}"];')
    for a, b in hasse_edges(sp):
        out.append(f"  {ids[a]} -> {ids[b]};")
    out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# exponent cache


def _fmt_cpts(cs) -> str:
    return " ".join(f"({c.pair.witness};{','.join(sorted(c.pair.set, key=tok_key))})->{c.tok}"
                    for c in sorted(cs, key=cpt_key))


_CPT_RE = re.compile(rf"\(({TOKEN});([^)]*)\)->({TOKEN})")


def _parse_cpts(s: str) -> frozenset:
    out = set()
    for m in _CPT_RE.finditer(s):
        xs = frozenset(t for t in m.group(2).split(",") if t)
        out.add(CPT(ConsPair(m.group(1), xs), m.group(3)))
    return frozenset(out)


def cache_name(a: InfoSystem, b: InfoSystem) -> str:
    return f"{a.name}__to__{b.name}.isw"


def write_exponent(ex: Exponent, path) -> tuple:
    """Write the merged system and a ``.tokens`` sidecar listing every raw token by class."""
    path = Path(path)
    path.write_text(serialize_system(ex.system))
    side = path.with_suffix(path.suffix + ".tokens")
    lines = [f"# {len(ex.tokens)} tokens in {len(ex.classes)} classes"]
    for name, cls in zip(ex.names, ex.classes):
        lines.append(f"class {name} {len(cls)}")
        for t in cls:
            lines.append(f"  W {_fmt_cpts(t.w)} | V {_fmt_cpts(t.v)}")
    side.write_text("\n".join(lines) + "\n")
    return path, side


def read_exponent_sidecar(path) -> dict:
    """Class name -> list of raw tokens, from a sidecar file."""
    out, cur = {}, None
    for line in Path(path).read_text().splitlines():
        if line.startswith("class "):
            cur = line.split()[1]
            out[cur] = []
        elif line.startswith("  W "):
            w, _, v = line[4:].partition(" | V ")
            out[cur].append(ExpToken(_parse_cpts(w), _parse_cpts(v)))
    for k in out:
        out[k].sort(key=exp_key)
    return out
