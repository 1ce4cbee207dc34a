# qsg/harness/errors.py

class QsgError(Exception):
    """Base class for every error raised by the harness"""
    pass

class DimensionError(QsgError):
    """Raised when matrix or subspace shapes do not fit together"""
    pass

class DomainError(QsgError):
    """Raised when a time, step or grid argument lies outside its domain"""
    pass

class NumericError(QsgError):
    """Raised when a factorization fails or misses its residual target"""
    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual

class QuadratureError(QsgError):
    """Raised when adaptive quadrature exhausts its depth before reaching tolerance"""
    def __init__(self, message, estimate=float("nan")):
        super().__init__(message)
        self.estimate = estimate

class InvarianceError(QsgError):
    """Raised when a subspace is not invariant under the operator it is used with"""
    def __init__(self, message, defect=float("nan")):
        super().__init__(message)
        self.defect = defect

class DiagnosticError(QsgError):
    """Raised when a proof-path diagnostic cannot be carried out"""
    pass

class ConfigError(QsgError):
    """Raised when a scenario configuration violates the schema"""
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field

class CatalogError(QsgError):
    """Raised when a scenario names an unknown catalog entry"""
    pass
