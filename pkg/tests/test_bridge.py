import pytest

from cfl.bridge import (
    MaximalChain,
    compatibility_check,
    descend,
    lift_chain,
    lift_chain_details,
    principal_ideal,
    route_cubillage,
    route_inversions,
    routes_containing,
)
from cfl.corteges import enumerate_corteges
from cfl.cubillage import (
    bits,
    capsid,
    inversions,
    is_dense_capsid,
    mask_of,
    natural_order_dag,
    standard_cubillage,
)
from cfl.digraph import enumerate_routes, two_route_graph, path_graph
from cfl.errors import NotDense, PreconditionViolated, PropertyViolated
from cfl.orders import TypeAssignment, check_convex, cortege_system, flip_graph, forced_relation_dag

from conftest import P1, P2, P2R, ROUTE, ROUTE_PRIME


@pytest.fixture
def example_sigma(example_order):
    return check_convex(example_order)


def test_route_cubillages_of_example(example_sigma):
    on_r = route_cubillage(example_sigma, ROUTE).cubillage
    on_rp = route_cubillage(example_sigma, ROUTE_PRIME).cubillage
    assert inversions(on_r) == {mask_of([1, 2, 3])}
    assert inversions(on_rp) == {mask_of([1, 2, 3]), mask_of([1, 2, 4])}
    # the tandem (p1, p2) is the packet 123 on both routes: dense on R, loose on R'
    c, c_prime = capsid(on_r, [1, 2, 3]), capsid(on_rp, [1, 2, 3])
    assert c.filling == c_prime.filling == "anti-standard"
    assert is_dense_capsid(on_r, c)
    assert not is_dense_capsid(on_rp, c_prime)


def test_capsid_cubes_name_the_tandem(example_sigma):
    rq = route_cubillage(example_sigma, ROUTE)
    names = {rq.cortege_of(cube) for cube in capsid(rq.cubillage, [1, 2, 3]).cubes}
    assert names == {(P2,), (("1", "2", "3"),), (P1,)}
    assert rq.cube_of((P1,)).T == mask_of([1, 2])


def test_all_standard_gives_standard(example_graph):
    sigma = TypeAssignment(example_graph, 2, frozenset())
    for route in enumerate_routes(example_graph):
        assert route_cubillage(sigma, route).cubillage.cubes == standard_cubillage(4, 2).cubes


def test_route_cubillage_rejects_short_route():
    g = path_graph(2)
    with pytest.raises(PreconditionViolated):
        route_cubillage(TypeAssignment(g, 3, frozenset()), ("1", "2"))


def test_routes_containing(example_graph):
    assert routes_containing(example_graph, (P1, P2)) == [ROUTE, ROUTE_PRIME]
    assert routes_containing(example_graph, (P1, P2R)) == [ROUTE_PRIME]


@pytest.mark.parametrize("graph", [two_route_graph(), path_graph(4), path_graph(5)], ids=["example", "chain4", "chain5"])
def test_route_inversions_agree_with_cubillages(graph):
    for sigma in flip_graph(graph, 2).nodes():
        for route in enumerate_routes(graph):
            assert inversions(route_cubillage(sigma, route).cubillage) == route_inversions(sigma, route)


def test_chain_on_abc():
    g = path_graph(3)
    (p,) = enumerate_corteges(g, 2)
    chain = MaximalChain(g, 2, (p,))
    order = lift_chain(chain)
    assert order.sequence == (p,)
    assert descend(check_convex(order)) == chain


def test_chain_json_roundtrip(example_graph):
    chain = descend(flip_graph(example_graph, 3).node(1))
    assert MaximalChain.from_json(example_graph, chain.to_json()) == chain


def test_invalid_chains(example_graph):
    upper = cortege_system(example_graph, 2).upper
    with pytest.raises(PropertyViolated):
        MaximalChain(example_graph, 2, tuple(upper[:3])).assignments()
    with pytest.raises(NotDense):
        # (p1, p2) is loose while (p1, p2*r) is still standard
        MaximalChain(example_graph, 2, ((P1, P2R), (P1, P2)) + tuple(upper)).assignments()


def test_lift_follows_flip_steps(example_graph):
    """Lifting a chain ranks every d-cortege consistently with natural orders on routes."""
    fg = flip_graph(example_graph, 3)
    for sigma in fg.nodes():
        lift = lift_chain_details(descend(sigma))
        for route, big in lift.route_cubillages.items():
            steps = lift.step_of[route]
            for a, after in natural_order_dag(big).items():
                assert all(steps[a] < steps[b] for b in after)


@pytest.mark.parametrize(
    "graph",
    [two_route_graph(), path_graph(3), path_graph(4), path_graph(5)],
    ids=["example", "chain3", "chain4", "chain5"],
)
def test_round_trip_with_membranes(graph):
    for sigma in flip_graph(graph, 3).nodes():
        chain = descend(sigma, check_membranes=True)
        assert len(chain.assignments()) == len(cortege_system(graph, 2).upper) + 1
        assert lift_chain_details(chain).assignment == sigma


def test_round_trip_degree_three_chains():
    g = path_graph(5)
    for sigma in flip_graph(g, 4).nodes():
        assert lift_chain_details(descend(sigma)).assignment == sigma


def test_descend_needs_degree_three(example_sigma):
    with pytest.raises(PreconditionViolated):
        descend(example_sigma)


def test_compatibility_trivial_cases(example_graph):
    sigma_prime = flip_graph(example_graph, 3).node(2)
    upper = frozenset(cortege_system(example_graph, 2).upper)
    start = compatibility_check(TypeAssignment(example_graph, 2, frozenset()), frozenset(), sigma_prime)
    assert start.is_ideal and start.compatible and start.chain_found
    end = compatibility_check(TypeAssignment(example_graph, 2, upper), upper, sigma_prime)
    assert end.is_ideal and end.compatible and end.chain_found


def test_compatibility_principal_ideal(example_graph):
    for sigma_prime in flip_graph(example_graph, 3).nodes():
        ideal = principal_ideal(sigma_prime, (P1, P2R))
        assert (P1, P2R) in ideal
        report = compatibility_check(TypeAssignment(example_graph, 2, ideal), ideal, sigma_prime)
        assert report.is_ideal and report.compatible
        assert report.chain_found
        steps = report.chain.assignments()
        assert any(s.anti_standard == ideal for s in steps)
        assert lift_chain_details(report.chain).assignment == sigma_prime


def test_compatibility_rejects_non_ideal(example_graph):
    sigma_prime = flip_graph(example_graph, 3).node(0)
    dag = forced_relation_dag(sigma_prime)
    sysm = dag.system
    # take an element with a predecessor and drop that predecessor
    j = next(i for i in range(sysm.m) if dag.anc[i])
    ideal = frozenset({sysm.lower[j]})
    report = compatibility_check(TypeAssignment(example_graph, 2, ideal), ideal, sigma_prime)
    assert not report.is_ideal
    assert report.chain_found is False


def test_compatibility_search_off(example_graph):
    sigma_prime = flip_graph(example_graph, 3).node(0)
    report = compatibility_check(TypeAssignment(example_graph, 2, frozenset()), frozenset(), sigma_prime, search=False)
    assert report.chain_found is None
    assert report.to_json()["compatible"]


def test_every_intermediate_class_of_descended_chain_is_compatible(example_graph):
    for sigma_prime in flip_graph(example_graph, 3).nodes():
        chain = descend(sigma_prime)
        for sigma in chain.assignments():
            report = compatibility_check(sigma, sigma.anti_standard, sigma_prime)
            assert report.is_ideal and report.chain_found


def test_cube_positions_track_packets(example_sigma):
    rq = route_cubillage(example_sigma, ROUTE_PRIME)
    for cube in rq.cubillage.cubes:
        p = rq.cortege_of(cube)
        assert len(bits(cube.T)) == len(p) + 1
