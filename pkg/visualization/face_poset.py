import networkx as nx


def to_digraph(cx):
    """Face poset of a cone complex: one node per cell, an arc face -> cell per face arrow."""
    G = nx.DiGraph()
    for cell in cx.cells:
        G.add_node(cell.name, dim=cell.cone.dim)
    for i, j, arrow in cx.arrows:
        G.add_edge(cx.cells[i].name, cx.cells[j].name, contracted=','.join(arrow.contracted))
    return G


def _quote(text):
    return '"%s"' % str(text).replace('"', '\\"')


def to_dot(cx, highlight=None):
    G = to_digraph(cx)
    lines = ['digraph face_poset {', '  rankdir=BT;', '  node [shape=box];']
    for n in sorted(G.nodes):
        attrs = ['label=%s' % _quote('%s\\ndim %d' % (n, G.nodes[n]['dim']))]
        if highlight is not None and n in highlight:
            attrs.append('style=filled')
        lines.append('  %s [%s];' % (_quote(n), ', '.join(attrs)))
    for a, b in sorted(G.edges):
        label = G.edges[a, b]['contracted']
        lines.append('  %s -> %s%s;' % (_quote(a), _quote(b), ' [label=%s]' % _quote(label) if label else ''))
    lines.append('}')
    return '\n'.join(lines) + '\n'
