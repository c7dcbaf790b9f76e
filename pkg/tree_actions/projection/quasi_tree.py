'''
The quasi-tree C_K of a family and probes of its geometry.

Every space contributes the integer points of Axis(g) inside a window of
the given radius around the base vertex, joined by their axis edges. Two
spaces X and Y with no K-large projection (d_Z(X, Y) <= K for every other
Z of the family) are joined by an edge of length K between every point of
pi_Y(X) and every point of pi_X(Y).
'''
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import networkx as nx
import numpy as np
from tqdm import tqdm

from tree_actions.errors import PreconditionError
from tree_actions.logger import Logger
from tree_actions.models.reports import CheckReport
from tree_actions.projection.family import ProjectionFamily
from tree_actions.projection.table import ProjectionTable

DISTANCE_SANDWICH = 'distance_sandwich'
HYPERBOLICITY = 'hyperbolicity'

WINDOW_FACTOR = 8
MAX_WINDOW_EXPANSION = 4
ARTIFACT_LIMIT = 0.05


@dataclass
class QuasiTreeGraph:
    '''
    A windowed C_K. Nodes are (space, position) pairs, edge weights are
    integers and boundary nodes carry boundary=True.
    '''
    K: int
    window_radius: int
    graph: nx.Graph = field(repr=False)
    spaces: list
    offsets: dict = field(repr=False)
    dropped_edges: int = 0

    def axis_distance(self, u, v):
        if u[0] != v[0]:
            raise PreconditionError("points lie on different spaces")
        return abs(self.offsets[u[1]] - self.offsets[v[1]])

    def adjacency(self):
        return list(nx.generate_edgelist(self.graph, data=['weight']))

    def to_dot(self, name='quasi_tree'):
        lines = [f"graph {name} {{"]
        for node in sorted(self.graph.nodes):
            lines.append(f'  "{node[0]}:{node[1]}";')
        for u, v, weight in sorted(self.graph.edges(data='weight')):
            lines.append(f'  "{u[0]}:{u[1]}" -- "{v[0]}:{v[1]}" '
                         f'[weight={weight}];')
        lines.append("}")
        return '\n'.join(lines) + '\n'


def _window(axis, radius):
    '''
    Positions of Axis(g) within distance radius of the base vertex.
    '''
    positions = [0]
    for step in (1, -1):
        p = step
        while abs(axis.offset_at(p)) <= radius:
            positions.append(p)
            p += step
    return sorted(positions)


def build_complex(family: ProjectionFamily, table: ProjectionTable, K,
                  window_radius=None, spaces=None, theta=None,
                  log_level=logging.WARNING) -> QuasiTreeGraph:
    '''
    Build C_K on a window of the family.

    spaces restricts the graph to some classes, the K-large projection rule
    still ranges over the whole family. Projection feet outside the window
    widen it once, up to MAX_WINDOW_EXPANSION times its radius; edges still
    leaving the window are dropped and counted.

    Raises
    ------
    PreconditionError
        If K < 1 or the window is empty
    '''
    logger = Logger(logger_name=__file__, log_level=log_level).get_logger()
    if K < 1:
        raise PreconditionError(f"K must be at least 1, got {K}")
    if theta is not None and K < 4 * theta:
        logger.warning(f"K = {K} is below 4 theta = {4 * theta}, the graph "
                       "need not be hyperbolic")

    spaces = list(range(len(family))) if spaces is None else list(spaces)
    radius = WINDOW_FACTOR * family.max_translation_length \
        if window_radius is None else window_radius
    if not spaces or radius < 0:
        raise PreconditionError("the window is empty")
    axis = family.base_axis

    # Pairs of spaces with no K-large projection
    largest = table.largest_intermediate()
    joined = [(x, y) for i, x in enumerate(spaces) for y in spaces[i + 1:]
              if largest[x, y] <= K]

    # Widen the window to the projection feet of joined pairs
    needed = max([max(abs(table.starts[b, a]), abs(table.ends[b, a]))
                  for x, y in joined for a, b in ((x, y), (y, x))],
                 default=0)
    if needed > radius:
        widened = min(int(needed), MAX_WINDOW_EXPANSION * radius)
        logger.info(f"widening window from {radius} to {widened}")
        radius = widened

    positions = _window(axis, radius)
    offsets = {p: axis.offset_at(p) for p in positions}
    inside = set(positions)

    graph = nx.Graph()
    for s in spaces:
        for p in positions:
            graph.add_node((s, p), boundary=p in (positions[0],
                                                  positions[-1]))
        for p, q in zip(positions, positions[1:]):
            graph.add_edge((s, p), (s, q),
                           weight=int(offsets[q] - offsets[p]))

    dropped = 0
    for x, y in joined:
        feet_on_y = table.projection(x, y).positions()
        feet_on_x = table.projection(y, x).positions()
        for p in feet_on_y:
            for q in feet_on_x:
                if p in inside and q in inside:
                    graph.add_edge((y, p), (x, q), weight=int(K))
                else:
                    dropped += 1

    logger.info(f"built C_{K} with {graph.number_of_nodes()} nodes, "
                f"{graph.number_of_edges()} edges, {len(joined)} joined "
                f"pairs and {dropped} dropped edges")

    return QuasiTreeGraph(K=int(K), window_radius=int(radius), graph=graph,
                          spaces=spaces, offsets=offsets,
                          dropped_edges=dropped)


def distance_sandwich_check(quasi_tree: QuasiTreeGraph, theta, samples,
                            seed=0) -> CheckReport:
    '''
    For sampled points x, z of one space, rho/4 <= d_C(x, z) <= 2 rho + 3K
    with rho the axis distance.

    Pairs whose shortest path runs through a window boundary node are
    window artifacts; they are counted and left out of the verdict. A
    violation fails the check; otherwise, if artifacts reach ARTIFACT_LIMIT
    of the samples, the window is too narrow to support a verdict and the
    check is skipped.
    '''
    K = quasi_tree.K
    inputs = {'K': K, 'theta': theta, 'samples': samples,
              'window_radius': quasi_tree.window_radius}
    if K <= 11 * theta:
        return CheckReport.skipped(DISTANCE_SANDWICH, inputs,
                                   f"K = {K} is not above 11 theta")
    if samples < 1:
        return CheckReport.skipped(DISTANCE_SANDWICH, inputs,
                                   "no samples requested")

    rng = random.Random(seed)
    graph = quasi_tree.graph
    positions = sorted(quasi_tree.offsets)
    lower_margins, upper_margins = [], []
    artifacts = 0
    failure = None

    for _ in range(samples):
        space = rng.choice(quasi_tree.spaces)
        x = (space, rng.choice(positions))
        z = (space, rng.choice(positions))
        rho = quasi_tree.axis_distance(x, z)
        distance, path = nx.single_source_dijkstra(graph, x, z,
                                                   weight='weight')
        if any(graph.nodes[v]['boundary'] for v in path[1:-1]):
            artifacts += 1
            continue
        lower = Fraction(distance) - Fraction(rho, 4)
        upper = 2 * rho + 3 * K - distance
        lower_margins.append(float(lower))
        upper_margins.append(upper)
        if failure is None and (lower < 0 or upper < 0):
            failure = {'x': x, 'z': z, 'rho': rho, 'd_C': distance}

    quantities = {
        'measured': len(lower_margins),
        'window_artifacts': artifacts,
        'artifact_fraction': artifacts / samples,
        'min_lower_margin': min(lower_margins, default=None),
        'min_upper_margin': min(upper_margins, default=None)
    }
    if lower_margins:
        counts, edges = np.histogram(lower_margins, bins=10)
        quantities['lower_margin_histogram'] = {
            'counts': counts.tolist(), 'edges': edges.tolist()}
        counts, edges = np.histogram(upper_margins, bins=10)
        quantities['upper_margin_histogram'] = {
            'counts': counts.tolist(), 'edges': edges.tolist()}

    if failure is None and artifacts / samples >= ARTIFACT_LIMIT:
        return CheckReport.skipped(
            DISTANCE_SANDWICH, inputs,
            f"window artifacts in {artifacts / samples:.1%} of samples reach "
            f"{ARTIFACT_LIMIT:.0%}, widen window_radius beyond "
            f"{quasi_tree.window_radius}", quantities)
    return CheckReport.decide(
        DISTANCE_SANDWICH, inputs, failure is None, quantities,
        witness=failure,
        reason="d_C(x, z) leaves [rho/4, 2 rho + 3K]")


class HyperbolicityEstimate(NamedTuple):
    '''
    Largest four-point defect found, the number of quadruples measured,
    (component size, defect) for every sampled component and the number of
    distinct nodes the quadruples touched.
    '''
    delta: Fraction
    samples: int
    components: list
    sampled_nodes: int


def _distance_rows(graph, nodes, maxsize):
    '''
    Cached lookup from a node index to its distances to every node of the
    component, as an array indexed like nodes.
    '''
    index = {v: i for i, v in enumerate(nodes)}

    @lru_cache(maxsize=maxsize)
    def row(i):
        lengths = nx.single_source_dijkstra_path_length(graph, nodes[i],
                                                        weight='weight')
        distances = np.empty(len(nodes), dtype=np.int64)
        for v, length in lengths.items():
            distances[index[v]] = length
        return distances

    return row


def hyperbolicity_probe(graph, samples, seed=0, row_cache=1024,
                        progress=False) -> HyperbolicityEstimate:
    '''
    Sampled four-point condition on every connected component.

    Quadruples are drawn uniformly from the whole component. Distance rows
    are computed by Dijkstra on first use and cached, at most row_cache per
    component; each component gets a share of the samples proportional to
    its size.
    '''
    if isinstance(graph, QuasiTreeGraph):
        graph = graph.graph
    rng = random.Random(seed)
    components = [sorted(c) for c in nx.connected_components(graph)
                  if len(c) >= 4]
    components.sort(key=lambda c: (-len(c), c[0]))
    total = sum(len(c) for c in components)

    delta = Fraction(0)
    measured = 0
    touched = 0
    per_component = []
    for nodes in components:
        row = _distance_rows(graph, nodes, row_cache)
        share = max(1, samples * len(nodes) // total)
        seen = set()
        worst = Fraction(0)
        for _ in tqdm(range(share), disable=not progress,
                      desc='four-point samples'):
            a, b, c, d = rng.sample(range(len(nodes)), 4)
            seen.update((a, b, c, d))
            from_a, from_b, from_c = row(a), row(b), row(c)
            sums = sorted([
                int(from_a[b] + from_c[d]),
                int(from_a[c] + from_b[d]),
                int(from_a[d] + from_b[c])
            ])
            worst = max(worst, Fraction(sums[-1] - sums[-2], 2))
        per_component.append((len(nodes), worst))
        delta = max(delta, worst)
        measured += share
        touched += len(seen)

    return HyperbolicityEstimate(delta, measured, per_component, touched)


def hyperbolicity_check(quasi_tree: QuasiTreeGraph, samples, seed=0,
                        progress=False) -> CheckReport:
    '''
    The sampled delta stays within 2K.
    '''
    estimate = hyperbolicity_probe(quasi_tree, samples, seed,
                                   progress=progress)
    inputs = {'K': quasi_tree.K, 'samples': samples,
              'window_radius': quasi_tree.window_radius}
    quantities = {'delta': estimate.delta, 'measured': estimate.samples,
                  'components': [size for size, _ in estimate.components],
                  'sampled_nodes': estimate.sampled_nodes}
    if estimate.samples == 0:
        return CheckReport.skipped(HYPERBOLICITY, inputs,
                                   "no component has 4 nodes", quantities)
    return CheckReport.decide(
        HYPERBOLICITY, inputs, estimate.delta <= 2 * quasi_tree.K,
        quantities, reason="sampled delta exceeds 2K")
