from mesh.builders import build_unit_box_mesh
from mesh.refinement import MeshHierarchy


class InitMeshesMixin(object):
    @classmethod
    def set_up(cls):
        cls.square = build_unit_box_mesh(2, 0.5)
        cls.cube = build_unit_box_mesh(3, 1.0)
        cls.square_hierarchy = MeshHierarchy(build_unit_box_mesh(2, 0.6), 3)
        cls.cube_hierarchy = MeshHierarchy(build_unit_box_mesh(3, 1.8), 2)
