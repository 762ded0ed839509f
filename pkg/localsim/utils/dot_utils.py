"""
Graphviz DOT export of ball hierarchies, ping-pong configurations and Hasse diagrams of partition posets.
Graphs are assembled as networkx digraphs and written with sorted nodes and edges so that output is stable.
"""
import networkx as nx

from localsim.groups.poset import refines


def _quote(text):
    return '"{}"'.format(text.replace("\\", "\\\\").replace('"', '\\"'))


def graph_to_dot(graph, name="G"):
    """
    Writes a networkx digraph as DOT. Node ids are strings; a "label" attribute becomes the node label and
    edge attributes are written as-is.

    Returns:
        str: DOT text ending with a newline
    """
    lines = ["digraph {} {{".format(name)]
    for key, value in sorted(graph.graph.get("node_defaults", {}).items()):
        lines.append("    node [{}={}];".format(key, value))
    for node in sorted(graph.nodes):
        attrs = graph.nodes[node]
        body = ", ".join("{}={}".format(k, _quote(str(v))) for k, v in sorted(attrs.items()))
        lines.append("    {}{};".format(_quote(node), " [{}]".format(body) if body else ""))
    for u, v in sorted(graph.edges):
        attrs = graph.edges[u, v]
        body = ", ".join("{}={}".format(k, _quote(str(x))) for k, x in sorted(attrs.items()))
        lines.append(
            "    {} -> {}{};".format(_quote(u), _quote(v), " [{}]".format(body) if body else "")
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def hierarchy_graph(space, depth):
    """
    Ball hierarchy truncated at @depth: one node per ball, labelled with its address and depth, and an edge
    from every ball to each maximal proper subball
    """
    graph = nx.DiGraph(node_defaults=dict(shape="circle"))
    for b in space.balls_up_to_depth(depth):
        label = "X" if b.is_root else b.address
        graph.add_node("b" + b.address, label="{}\\ndepth {}".format(label, b.depth))
        if not b.is_root:
            graph.add_edge("b" + b.parent.address, "b" + b.address)
    return graph


def hierarchy_to_dot(space, depth):
    return graph_to_dot(hierarchy_graph(space, depth), name="hierarchy")


def hierarchy_to_text(space, depth):
    """
    Indented listing of the hierarchy, one ball per line in address order
    """
    lines = []
    for b in sorted(space.balls_up_to_depth(depth), key=lambda b: b.address):
        lines.append("{}{} depth {}".format("  " * b.depth, b, b.depth))
    return "\n".join(lines) + "\n"


def pingpong_graph(w):
    """
    The ping-pong configuration: X with the balls A1, A2 inside it, B1 .. B4 inside A1 and A2, and the
    delta arrows B2 -> B3 -> B4 -> B2
    """
    graph = nx.DiGraph(node_defaults=dict(shape="box"))
    graph.add_node("X", label="X")
    names = {}
    for i, a in enumerate(w.a_balls, start=1):
        names[a] = "A{}".format(i)
        graph.add_node(names[a], label="A{} = {}".format(i, a))
        graph.add_edge("X", names[a], style="dotted")
    for i, b in enumerate(w.b_balls, start=1):
        names[b] = "B{}".format(i)
        graph.add_node(names[b], label="B{} = {}".format(i, b))
        parent = next(a for a in w.a_balls if a.contains(b))
        graph.add_edge(names[parent], names[b], style="dotted")
    for i, d in enumerate(w.deltas, start=2):
        graph.add_edge(names[d.dom], names[d.cod], label="d{}".format(i))
    return graph


def pingpong_to_dot(w):
    return graph_to_dot(pingpong_graph(w), name="pingpong")


def hasse_graph(partitions):
    """
    Hasse diagram of a list of partitions under refinement, coarser partitions pointing to finer ones
    """
    graph = nx.DiGraph()
    ids = {}
    for i, p in enumerate(partitions):
        ids[p] = "p{}".format(i)
        graph.add_node(ids[p], label=str(p))
    for p in partitions:
        for q in partitions:
            if p != q and refines(p, q):
                graph.add_edge(ids[p], ids[q])
    reduced = nx.transitive_reduction(graph)
    reduced.add_nodes_from(graph.nodes(data=True))
    return reduced


def hasse_to_dot(partitions):
    return graph_to_dot(hasse_graph(partitions), name="hasse")
