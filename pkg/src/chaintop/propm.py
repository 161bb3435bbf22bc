"""Operation graphs over counit, coproduct, and join, with evaluation.

A graph is a wiring diagram built from three generators: eps (1 -> 0,
degree 0), delta (1 -> 2, degree 0), and star (2 -> 1, degree 1). The
stored vertex order is a linear extension of the wiring; reordering the
stars of a graph changes its sign by the Koszul rule, which evaluation
and the boundary both respect.

The differential replaces one star at a time by the two counit wirings,
matching d[0,1] = [1] - [0] on the interval whose endpoints are the two
ways a join can degenerate. The induced coproduct on graphs applies the
cube diagonal to the stars, so graphs form a bialgebra that evaluation
turns into operations on any chain-level coalgebra with a join.
"""

from __future__ import annotations

from .cubical import I, serre_coproduct
from .freemod import FreeElement, add_into, koszul_sign
from .rings import Ring, ZZ

KIND_ARITY = {"eps": (1, 0), "delta": (1, 2), "star": (2, 1)}


class PropGraph:
    """Immutable wiring diagram; vertex order is part of the data."""

    __slots__ = ("n_in", "n_out", "kinds", "vertex_inputs", "out_sources")

    def __init__(self, n_in: int, n_out: int, kinds, vertex_inputs, out_sources):
        kinds = tuple(kinds)
        vertex_inputs = tuple(tuple(v) for v in vertex_inputs)
        out_sources = tuple(out_sources)
        if n_in < 0 or n_out < 0:
            raise ValueError("leg counts must be nonnegative")
        if len(kinds) != len(vertex_inputs):
            raise ValueError("one input tuple per vertex required")
        produced = {("in", i) for i in range(n_in)}
        consumed = []
        for vid, kind in enumerate(kinds):
            if kind not in KIND_ARITY:
                raise ValueError(f"unknown vertex kind {kind!r}")
            ins, outs = KIND_ARITY[kind]
            if len(vertex_inputs[vid]) != ins:
                raise ValueError(f"vertex {vid} ({kind}) needs {ins} inputs")
            for src in vertex_inputs[vid]:
                if src not in produced:
                    raise ValueError(
                        f"vertex {vid} consumes unavailable source {src!r}"
                    )
                consumed.append(src)
            for port in range(outs):
                produced.add(("v", vid, port))
        for src in out_sources:
            if src not in produced:
                raise ValueError(f"output leg consumes unavailable source {src!r}")
            consumed.append(src)
        if len(out_sources) != n_out:
            raise ValueError(f"expected {n_out} output legs")
        if len(consumed) != len(set(consumed)):
            raise ValueError("a source is consumed more than once")
        if len(consumed) != len(produced):
            unused = produced - set(consumed)
            raise ValueError(f"dangling sources: {sorted(unused)!r}")
        object.__setattr__(self, "n_in", int(n_in))
        object.__setattr__(self, "n_out", int(n_out))
        object.__setattr__(self, "kinds", kinds)
        object.__setattr__(self, "vertex_inputs", vertex_inputs)
        object.__setattr__(self, "out_sources", out_sources)

    def __setattr__(self, name, value):
        raise AttributeError("PropGraph is immutable")

    def _key(self):
        return (self.n_in, self.n_out, self.kinds, self.vertex_inputs, self.out_sources)

    def __eq__(self, other):
        return isinstance(other, PropGraph) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return (
            f"PropGraph({self.n_in}->{self.n_out}, "
            f"{'|'.join(self.kinds) or 'wires'})"
        )

    @property
    def degree(self) -> int:
        return sum(1 for k in self.kinds if k == "star")

    @property
    def stars(self) -> tuple:
        return tuple(vid for vid, k in enumerate(self.kinds) if k == "star")


def identity_graph(n: int) -> PropGraph:
    return PropGraph(n, n, (), (), tuple(("in", i) for i in range(n)))


def permutation_graph(perm) -> PropGraph:
    n = len(perm)
    return PropGraph(n, n, (), (), tuple(("in", perm[i]) for i in range(n)))


def counit_graph() -> PropGraph:
    return PropGraph(1, 0, ("eps",), ((("in", 0),),), ())


def coproduct_graph() -> PropGraph:
    return PropGraph(
        1, 2, ("delta",), ((("in", 0),),), (("v", 0, 0), ("v", 0, 1))
    )


def join_graph() -> PropGraph:
    return PropGraph(2, 1, ("star",), ((("in", 0), ("in", 1)),), (("v", 0, 0),))


def compose_graphs(first: PropGraph, second: PropGraph) -> PropGraph:
    """Feed the outputs of first into the inputs of second."""
    if first.n_out != second.n_in:
        raise ValueError(
            f"cannot compose: {first.n_out} outputs into {second.n_in} inputs"
        )
    off = len(first.kinds)

    def remap(src):
        if src[0] == "in":
            return first.out_sources[src[1]]
        return ("v", src[1] + off, src[2])

    kinds = first.kinds + second.kinds
    vins = first.vertex_inputs + tuple(
        tuple(remap(s) for s in v) for v in second.vertex_inputs
    )
    out = tuple(remap(s) for s in second.out_sources)
    return PropGraph(first.n_in, second.n_out, kinds, vins, out)


def tensor_graphs(a: PropGraph, b: PropGraph) -> PropGraph:
    off = len(a.kinds)

    def remap(src):
        if src[0] == "in":
            return ("in", src[1] + a.n_in)
        return ("v", src[1] + off, src[2])

    kinds = a.kinds + b.kinds
    vins = a.vertex_inputs + tuple(
        tuple(remap(s) for s in v) for v in b.vertex_inputs
    )
    out = a.out_sources + tuple(remap(s) for s in b.out_sources)
    return PropGraph(a.n_in + b.n_in, a.n_out + b.n_out, kinds, vins, out)


def reorder_vertices(graph: PropGraph, order) -> PropGraph:
    """Relabel vertices so order[t] sits at slot t; must stay acyclic."""
    order = tuple(order)
    if sorted(order) != list(range(len(graph.kinds))):
        raise ValueError("order must permute the vertices")
    slot = {vid: t for t, vid in enumerate(order)}

    def remap(src):
        return ("v", slot[src[1]], src[2]) if src[0] == "v" else src

    kinds = tuple(graph.kinds[vid] for vid in order)
    vins = tuple(
        tuple(remap(s) for s in graph.vertex_inputs[vid]) for vid in order
    )
    out = tuple(remap(s) for s in graph.out_sources)
    return PropGraph(graph.n_in, graph.n_out, kinds, vins, out)


def reorder_sign(graph: PropGraph, order) -> int:
    """Koszul sign of the reordering: one -1 per inverted pair of stars."""
    order = tuple(order)
    star_slots = [t for t, vid in enumerate(order) if graph.kinds[vid] == "star"]
    seq = [order[t] for t in star_slots]
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


def _star_to_eps(graph: PropGraph, vid: int, eaten_idx: int) -> PropGraph:
    """Degenerate one star: the counit eats one input, the other passes."""
    a, b = graph.vertex_inputs[vid]
    eaten = (a, b)[eaten_idx]
    passing = (b, a)[eaten_idx]
    kinds = list(graph.kinds)
    kinds[vid] = "eps"
    vins = list(graph.vertex_inputs)
    vins[vid] = (eaten,)

    def rewire(src):
        return passing if src == ("v", vid, 0) else src

    vins = [tuple(rewire(s) for s in v) for v in vins]
    out = tuple(rewire(s) for s in graph.out_sources)
    return PropGraph(graph.n_in, graph.n_out, kinds, vins, out)


def graph_boundary(graph: PropGraph, ring: Ring = ZZ) -> FreeElement:
    """d(graph): each star degenerates both ways, with Koszul position signs.

    Per star, the positive term lets the counit eat the first input and
    the negative term the second, matching d[0,1] = [1] - [0].
    """
    terms = {}
    # vertex 0 acts innermost, so the Leibniz sign counts stars after it
    remaining = graph.degree
    for vid, kind in enumerate(graph.kinds):
        if kind != "star":
            continue
        remaining -= 1
        sign = ring.from_int(-1 if remaining % 2 else 1)
        add_into(terms, ring, _star_to_eps(graph, vid, 0), sign)
        add_into(terms, ring, _star_to_eps(graph, vid, 1), ring.neg(sign))
    return FreeElement(ring, terms)


def evaluate(graph: PropGraph, bialgebra, inputs) -> FreeElement:
    """Run the graph on basis keys of a chain-level bialgebra.

    bialgebra provides ring, degree, counit, coproduct, join; the result
    is a sum of n_out-tuples of basis keys with coefficients, including
    all Koszul signs from moving the degree-1 joins into position.
    """
    ring = bialgebra.ring
    inputs = tuple(inputs)
    if len(inputs) != graph.n_in:
        raise ValueError(f"graph wants {graph.n_in} inputs, got {len(inputs)}")
    start = tuple((("in", i), key) for i, key in enumerate(inputs))
    states = [(ring.one, start)]
    for vid, kind in enumerate(graph.kinds):
        sources = graph.vertex_inputs[vid]
        new_states = []
        for coef, frontier in states:
            pos = {src: t for t, (src, _) in enumerate(frontier)}
            if kind == "eps":
                p = pos[sources[0]]
                c = bialgebra.counit(frontier[p][1])
                if ring.is_zero(c):
                    continue
                new_states.append(
                    (ring.mul(coef, c), frontier[:p] + frontier[p + 1 :])
                )
            elif kind == "delta":
                p = pos[sources[0]]
                for (k1, k2), c in bialgebra.coproduct(frontier[p][1]).items():
                    repl = ((("v", vid, 0), k1), (("v", vid, 1), k2))
                    new_states.append(
                        (
                            ring.mul(coef, c),
                            frontier[:p] + repl + frontier[p + 1 :],
                        )
                    )
            else:
                pa = pos[sources[0]]
                pb = pos[sources[1]]
                ka = frontier[pa][1]
                kb = frontier[pb][1]
                degrees = [bialgebra.degree(k) for _, k in frontier]
                pmin = min(pa, pb)
                perm = (
                    list(range(pmin))
                    + [pa, pb]
                    + [t for t in range(pmin, len(frontier)) if t not in (pa, pb)]
                )
                sign = koszul_sign(perm, degrees)
                # the join has degree 1 and passes everything left of it
                if sum(degrees[:pmin]) % 2:
                    sign = -sign
                permuted = tuple(frontier[t] for t in perm)
                for key, c in bialgebra.join(ka, kb).items():
                    repl = ((("v", vid, 0), key),)
                    new_states.append(
                        (
                            ring.mul(coef, ring.mul(ring.from_int(sign), c)),
                            permuted[:pmin] + repl + permuted[pmin + 2 :],
                        )
                    )
        states = new_states
    out = {}
    for coef, frontier in states:
        pos = {src: t for t, (src, _) in enumerate(frontier)}
        degrees = [bialgebra.degree(k) for _, k in frontier]
        perm = [pos[s] for s in graph.out_sources]
        sign = koszul_sign(perm, degrees)
        key = tuple(frontier[t][1] for t in perm)
        add_into(out, ring, key, ring.mul(coef, ring.from_int(sign)))
    return FreeElement(ring, out)


def evaluate_element(graph: PropGraph, bialgebra, element: FreeElement) -> FreeElement:
    """Evaluate a single-input graph on a chain, extended linearly."""
    if graph.n_in != 1:
        raise ValueError("evaluate_element needs a single-input graph")
    ring = bialgebra.ring
    out = FreeElement.zero(ring)
    for key, c in element.items():
        out = out + evaluate(graph, bialgebra, (key,)).scale(c)
    return out


def hopf_coproduct(graph: PropGraph, ring: Ring = ZZ) -> FreeElement:
    """Diagonal on graphs: the cube diagonal applied to the stars.

    Stars are the axes of a cube in reverse vertex order, so axis signs
    line up with the boundary's innermost-first Leibniz convention; each
    diagonal term keeps a star on one side and degenerates it on the
    other, 0 passing the first input and 1 the second.
    """
    stars = tuple(reversed(graph.stars))
    word = (I,) * len(stars)
    terms = {}
    for (left, right), c in serre_coproduct(word, ring).items():
        gl = graph
        gr = graph
        for t, vid in enumerate(stars):
            if left[t] == "0":
                gl = _star_to_eps(gl, vid, 1)
            elif left[t] == "1":
                gl = _star_to_eps(gl, vid, 0)
            if right[t] == "0":
                gr = _star_to_eps(gr, vid, 1)
            elif right[t] == "1":
                gr = _star_to_eps(gr, vid, 0)
        add_into(terms, ring, (gl, gr), c)
    return FreeElement(ring, terms)


def hopf_counit(graph: PropGraph, ring: Ring = ZZ):
    return ring.one if graph.degree == 0 else ring.zero


def msl_generator(parts) -> PropGraph:
    """Split one strand into labeled tensor factors and join the groups.

    parts lists strictly increasing tuples partitioning 1..N; strand k
    of the iterated coproduct goes to group j when k is in parts[j], and
    each group is joined left to right. Arity 1 -> len(parts), degree
    N - len(parts).
    """
    parts = tuple(tuple(int(i) for i in p) for p in parts)
    if not parts:
        raise ValueError("need at least one part")
    flat = [i for p in parts for i in p]
    n = len(flat)
    if sorted(flat) != list(range(1, n + 1)):
        raise ValueError(f"parts must partition 1..{n}: {parts!r}")
    for p in parts:
        if any(a >= b for a, b in zip(p, p[1:])) or not p:
            raise ValueError(f"part not strictly increasing: {p!r}")
    kinds = []
    vins = []
    strands = []
    src = ("in", 0)
    for k in range(n - 1):
        vid = len(kinds)
        kinds.append("delta")
        vins.append((src,))
        strands.append(("v", vid, 0))
        src = ("v", vid, 1)
    strands.append(src)
    out = []
    for p in parts:
        acc = strands[p[0] - 1]
        for i in p[1:]:
            vid = len(kinds)
            kinds.append("star")
            vins.append((acc, strands[i - 1]))
            acc = ("v", vid, 0)
        out.append(acc)
    return PropGraph(1, len(parts), kinds, vins, out)


def random_prop_graph(rng, n_in: int | None = None, max_vertices: int = 6,
                      max_stars: int | None = None) -> PropGraph:
    """Random valid wiring; the pool invariant keeps every source used."""
    if n_in is None:
        n_in = rng.randrange(1, 4)
    pool = [("in", i) for i in range(n_in)]
    kinds = []
    vins = []
    stars = 0
    for _ in range(rng.randrange(0, max_vertices + 1)):
        if not pool:
            break
        options = ["delta", "eps"]
        if len(pool) >= 2 and (max_stars is None or stars < max_stars):
            options.append("star")
        kind = rng.choice(options)
        vid = len(kinds)
        if kind == "star":
            a = pool.pop(rng.randrange(len(pool)))
            b = pool.pop(rng.randrange(len(pool)))
            kinds.append(kind)
            vins.append((a, b))
            pool.append(("v", vid, 0))
            stars += 1
        else:
            src = pool.pop(rng.randrange(len(pool)))
            kinds.append(kind)
            vins.append((src,))
            if kind == "delta":
                pool.extend([("v", vid, 0), ("v", vid, 1)])
    out = list(pool)
    rng.shuffle(out)
    return PropGraph(n_in, len(out), kinds, vins, out)


def random_linear_extension(graph: PropGraph, rng):
    """A random vertex order compatible with the wiring."""
    nv = len(graph.kinds)
    deps = {vid: set() for vid in range(nv)}
    for vid in range(nv):
        for src in graph.vertex_inputs[vid]:
            if src[0] == "v":
                deps[vid].add(src[1])
    placed = []
    remaining = set(range(nv))
    while remaining:
        ready = [v for v in remaining if deps[v] <= set(placed)]
        pick = rng.choice(ready)
        placed.append(pick)
        remaining.discard(pick)
    return placed


# --- textual graph literals ---

def graph_to_sexp(graph: PropGraph) -> str:
    """Render as (graph (in n) (vertex kind src ...) ... (out src ...))."""

    def src(s):
        if s[0] == "in":
            return f"(in {s[1]})"
        return f"(v {s[1]} {s[2]})"

    parts = [f"(in {graph.n_in})"]
    for kind, vins in zip(graph.kinds, graph.vertex_inputs):
        parts.append(f"(vertex {kind} {' '.join(src(s) for s in vins)}".rstrip() + ")")
    parts.append(f"(out {' '.join(src(s) for s in graph.out_sources)}".rstrip() + ")")
    return f"(graph {' '.join(parts)})"


def _tokenize(text: str):
    return text.replace("(", " ( ").replace(")", " ) ").split()


def _parse_sexp(tokens, pos=0):
    if pos >= len(tokens):
        raise ValueError("unexpected end of graph literal")
    tok = tokens[pos]
    if tok == "(":
        out = []
        pos += 1
        while pos < len(tokens) and tokens[pos] != ")":
            node, pos = _parse_sexp(tokens, pos)
            out.append(node)
        if pos >= len(tokens):
            raise ValueError("unbalanced parentheses in graph literal")
        return out, pos + 1
    if tok == ")":
        raise ValueError("unexpected ')' in graph literal")
    return tok, pos + 1


def graph_from_sexp(text: str) -> PropGraph:
    """Parse the textual graph format produced by graph_to_sexp."""
    tree, pos = _parse_sexp(_tokenize(text))
    if pos != len(_tokenize(text)):
        raise ValueError("trailing tokens after graph literal")
    if not isinstance(tree, list) or not tree or tree[0] != "graph":
        raise ValueError("graph literal must start with (graph ...)")

    def parse_src(node):
        if not isinstance(node, list) or not node:
            raise ValueError(f"bad source {node!r}")
        if node[0] == "in" and len(node) == 2:
            return ("in", int(node[1]))
        if node[0] == "v" and len(node) == 3:
            return ("v", int(node[1]), int(node[2]))
        raise ValueError(f"bad source {node!r}")

    n_in = None
    kinds = []
    vins = []
    out = None
    for node in tree[1:]:
        if not isinstance(node, list) or not node:
            raise ValueError(f"bad clause {node!r}")
        head = node[0]
        if head == "in":
            n_in = int(node[1])
        elif head == "vertex":
            kinds.append(node[1])
            vins.append(tuple(parse_src(s) for s in node[2:]))
        elif head == "out":
            out = tuple(parse_src(s) for s in node[1:])
        else:
            raise ValueError(f"unknown clause {head!r}")
    if n_in is None or out is None:
        raise ValueError("graph literal needs (in n) and (out ...) clauses")
    return PropGraph(n_in, len(out), kinds, vins, out)


# --- the cyclic resolution and the lifting machinery ---

class WResolution:
    """Minimal free resolution of the trivial module over k[C_p].

    One generator e_i per degree; d e_i alternates between 1 - rho and
    the norm 1 + rho + ... + rho^{p-1}.
    """

    def __init__(self, p: int):
        from .rings import is_prime

        if not is_prime(p):
            raise ValueError(f"p must be prime, got {p}")
        self.p = p

    def differential(self, i: int):
        """d e_i as ((rho power, integer coefficient), ...)."""
        if i < 0:
            raise ValueError("negative resolution degree")
        if i == 0:
            return ()
        if i % 2 == 1:
            return ((0, 1), (1, -1))
        return tuple((k, 1) for k in range(self.p))


class PsiMachine:
    """Natural chain operations chains(model) -> chains(model)^{otimes p}.

    Realizes the resolution generators as operations: e_0 becomes the
    iterated coproduct, and each higher generator is lifted against the
    boundary demanded by the resolution differential, using the
    basepoint-join contraction on the standard model. Values on lower
    cells are pushforwards of the value on the top cell of their own
    dimension, so every value is natural in the model.
    """

    def __init__(self, p: int, geometry: str = "simplex", ring: Ring | None = None):
        from .rings import GF

        if geometry not in ("simplex", "cube"):
            raise ValueError(f"unknown geometry {geometry!r}")
        self.p = p
        self.geometry = geometry
        self.ring = GF(p) if ring is None else ring
        self.w = WResolution(p)
        self._models = {}
        self._top_values = {}

    def model(self, m: int):
        if m not in self._models:
            if self.geometry == "simplex":
                from .simplicial import SimplexBialgebra

                self._models[m] = SimplexBialgebra(m, self.ring)
            else:
                from .cubical import CubeBialgebra

                self._models[m] = CubeBialgebra(m, self.ring)
        return self._models[m]

    def cell_dim(self, key) -> int:
        if self.geometry == "simplex":
            return len(key) - 1
        from .cubical import cube_word_degree

        return cube_word_degree(key)

    def _push(self, key, component):
        # image of a standard-model cell under the characteristic
        # inclusion of key; never degenerate on standard models
        if self.geometry == "simplex":
            return tuple(key[t] for t in component)
        from .cubical import cube_word_substitute

        return cube_word_substitute(key, component)

    def rho(self, element: FreeElement) -> FreeElement:
        """Cyclic action on p-tensors: last factor to the front."""
        from .freemod import cyclic_rotation_sign

        ring = self.ring
        terms = {}
        for key, c in element.items():
            degrees = [self.cell_dim(x) for x in key]
            sign = cyclic_rotation_sign(degrees)
            new_key = (key[-1],) + key[:-1]
            add_into(terms, ring, new_key, ring.mul(c, ring.from_int(sign)))
        return FreeElement(ring, terms)

    def rho_power(self, element: FreeElement, k: int) -> FreeElement:
        for _ in range(k % self.p):
            element = self.rho(element)
        return element

    def iterated_coproduct(self, bial, key) -> FreeElement:
        ring = self.ring
        current = {(key,): ring.one}
        while True:
            width = len(next(iter(current)))
            if width == self.p:
                return FreeElement(ring, current)
            new = {}
            for tup, c in current.items():
                for (a, b), c2 in bial.coproduct(tup[-1]).items():
                    add_into(new, ring, tup[:-1] + (a, b), ring.mul(c, c2))
            current = new

    def tensor_diff(self, bial, element: FreeElement) -> FreeElement:
        """Leibniz differential on p-tensors of cells of one model."""
        ring = self.ring
        terms = {}
        for key, c in element.items():
            sign = 1
            for j, x in enumerate(key):
                coeff = ring.mul(c, ring.from_int(sign))
                for face, c2 in bial.complex.diff(x).items():
                    new_key = key[:j] + (face,) + key[j + 1 :]
                    add_into(terms, ring, new_key, ring.mul(coeff, c2))
                if bial.degree(x) % 2:
                    sign = -sign
        return FreeElement(ring, terms)

    def h_tensor(self, bial, element: FreeElement) -> FreeElement:
        """Tensor contraction: project the prefix, contract one factor.

        The projected prefix has degree zero, so the degree-1 contraction
        passes it without signs; d h + h d = id - (projection)^p.
        """
        ring = self.ring
        terms = {}
        for key, c in element.items():
            for j in range(self.p):
                coeff = c
                dead = False
                for x in key[:j]:
                    e = bial.counit(x)
                    if ring.is_zero(e):
                        dead = True
                        break
                    coeff = ring.mul(coeff, e)
                if dead:
                    continue
                prefix = (bial.basepoint,) * j
                for lifted, c2 in bial.contract(key[j]).items():
                    new_key = prefix + (lifted,) + key[j + 1 :]
                    add_into(terms, ring, new_key, ring.mul(coeff, c2))
        return FreeElement(ring, terms)

    def top_value(self, i: int, m: int) -> FreeElement:
        """psi(e_i) on the top cell of the m-dimensional model."""
        if (i, m) in self._top_values:
            return self._top_values[(i, m)]
        ring = self.ring
        bial = self.model(m)
        top = bial.top
        if i == 0:
            out = self.iterated_coproduct(bial, top)
        else:
            z = FreeElement.zero(ring)
            for power, coeff in self.w.differential(i):
                z = z + self.rho_power(self.top_value(i - 1, m), power).scale(
                    ring.from_int(coeff)
                )
            sign = ring.from_int(-1 if i % 2 else 1)
            for face, c in bial.complex.diff(top).items():
                z = z + self.on_cell(i, face).scale(ring.mul(sign, c))
            out = self.h_tensor(bial, z)
        self._top_values[(i, m)] = out
        return out

    def on_cell(self, i: int, key) -> FreeElement:
        """psi(e_i) on any standard-model cell, by naturality.

        The value on a face is the pushforward of the value on the top
        cell of its own dimension, so components come out in the same
        coordinates as the input cell.
        """
        m = self.cell_dim(key)
        value = self.top_value(i, m)
        if key == self.model(m).top:
            return value
        ring = self.ring
        terms = {}
        for tup, c in value.items():
            new_key = tuple(self._push(key, x) for x in tup)
            add_into(terms, ring, new_key, c)
        return FreeElement(ring, terms)

    def boundary_defect(self, i: int, n: int, key):
        """d(psi(e_i)(x)) - psi(d e_i)(x) - (-1)^i psi(e_i)(dx) in model n."""
        ring = self.ring
        bial = self.model(n)
        lhs = self.tensor_diff(bial, self.on_cell(i, key))
        rhs = FreeElement.zero(ring)
        for power, coeff in self.w.differential(i):
            rhs = rhs + self.rho_power(self.on_cell(i - 1, key), power).scale(
                ring.from_int(coeff)
            )
        sign = ring.from_int(-1 if i % 2 else 1)
        for face, c in bial.complex.diff(key).items():
            rhs = rhs + self.on_cell(i, face).scale(ring.mul(sign, c))
        return lhs - rhs
