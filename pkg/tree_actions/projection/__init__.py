from tree_actions.projection.family import (
    ProjectionFamily,
    build_family,
    projection,
    y_equality_check,
    y_equality_sweep
)
from tree_actions.projection.quasi_tree import (
    QuasiTreeGraph,
    build_complex,
    distance_sandwich_check,
    hyperbolicity_check,
    hyperbolicity_probe
)
from tree_actions.projection.table import (
    AxiomReport,
    ProjectionTable,
    build_table,
    equivariance_check,
    p2_growth,
    stabilizer_intersection_probe,
    verify_axioms
)

__all__ = ['ProjectionFamily', 'build_family', 'projection',
           'y_equality_check', 'y_equality_sweep', 'QuasiTreeGraph',
           'build_complex', 'distance_sandwich_check', 'hyperbolicity_check',
           'hyperbolicity_probe', 'AxiomReport', 'ProjectionTable',
           'build_table', 'equivariance_check', 'p2_growth',
           'stabilizer_intersection_probe', 'verify_axioms']
