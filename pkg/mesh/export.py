def write_mesh_text(mesh, stream) -> None:
    """
    Write a mesh as plain text, one `v x y [z]` line per vertex and one
    `e i j k [l]` line per element (zero based vertex indices)

    @param stream: writable text stream
    """
    for point in mesh.vertices:
        stream.write('v ' + ' '.join(repr(float(x)) for x in point) + '\n')
    for element in mesh.elements:
        stream.write('e ' + ' '.join(str(int(i)) for i in element) + '\n')


def read_mesh_text(stream):
    """Read a mesh written by `write_mesh_text`"""
    from mesh.level import MeshLevel

    vertices, elements = [], []
    for line in stream:
        parts = line.split()
        if not parts:
            continue
        if parts[0] == 'v':
            vertices.append([float(x) for x in parts[1:]])
        elif parts[0] == 'e':
            elements.append([int(i) for i in parts[1:]])
    return MeshLevel(vertices, elements)
