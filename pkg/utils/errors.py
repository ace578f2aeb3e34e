class TropError(Exception):
    """Base class for every error raised by trop1."""


class DimensionMismatch(TropError, ValueError):
    pass


class InvalidCurve(TropError, ValueError):
    pass


class InvalidType(TropError, ValueError):

    def __init__(self, message, vertex=None, defect=None):
        super().__init__(message)
        self.vertex = vertex
        self.defect = defect


class InfeasibleCone(TropError):
    pass


class InconsistencyError(TropError, AssertionError):
    pass


class DescentError(TropError, ValueError):
    pass


class InstanceError(TropError, ValueError):

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line  = line
        where = []
        if field is not None: where.append(field)
        if line is not None:  where.append('line %d' % line)
        super().__init__(message if not where else '%s (%s)' % (message, ', '.join(where)))
