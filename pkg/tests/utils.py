from raag_stabilisers.graphs import Graph


def path3():
    """a - b - c"""
    return Graph.from_edges(['a', 'b', 'c'], [('a', 'b'), ('b', 'c')])


def triangle():
    return Graph.from_edges(['a', 'b', 'c'], [('a', 'b'), ('b', 'c'), ('a', 'c')])


def edgeless(count=3):
    return Graph.from_edges(['a', 'b', 'c', 'd'][:count], [])


def names(graph, members):
    return set(graph.names_of(members))
