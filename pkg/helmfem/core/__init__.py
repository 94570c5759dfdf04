from .errors import (
    HelmholtzError,
    DomainError,
    ParameterError,
    MeshValidityError,
    MeshFormatError,
    MeshConformityError,
    ComputationError,
    SolverError,
    ConvergenceError,
    StudyError,
)
from .models import (
    ProblemKind,
    Region,
    BoundaryTag,
    Sampling,
    Branch,
    PmlProfile,
    ProblemSpec,
    ErrorReport,
    StudyRecord,
)
from .coefficients import Medium, ScattererMedium, HomogeneousMedium
