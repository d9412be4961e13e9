"""
Error handling utilities for the proximal Voronoi toolkit.

This module provides the exception hierarchy shared by every package, an
error logging decorator for file loaders, an error context manager, and a
violation tracker used by the oracle checks to collect failures for reporting.
"""

import logging
import functools
from typing import Callable, Any, Optional, List, Dict


logger = logging.getLogger(__name__)


# ============================================================================
# Custom Exception Classes
# ============================================================================

class VoronoiError(Exception):
    """Base exception for all toolkit errors."""
    pass


class GeometryError(VoronoiError):
    """Exception raised for invalid geometric input."""
    pass


class CoincidentPointsError(GeometryError):
    """Exception raised when two points that must differ coincide within tolerance."""
    def __init__(self, first: Any, second: Any, tol: float):
        self.first = first
        self.second = second
        self.tol = tol
        super().__init__(f"Points {first} and {second} coincide within tolerance {tol:g}")


class DegenerateGeometryError(GeometryError):
    """Exception raised for polygons or segments without extent (zero area or length)."""
    pass


class GeneratingSetError(VoronoiError):
    """Exception raised for invalid generating sets."""
    pass


class EmptySitesError(GeneratingSetError):
    """Exception raised when a generating set has no sites."""
    def __init__(self, message: str = "Generating set must contain at least one site"):
        super().__init__(message)


class DuplicateSiteError(GeneratingSetError):
    """Exception raised when two sites coincide within the merge tolerance."""
    def __init__(self, first_id: int, second_id: int):
        self.first_id = first_id
        self.second_id = second_id
        super().__init__(f"Sites {first_id} and {second_id} are duplicates")


class SiteOutsideBoundingBoxError(GeneratingSetError):
    """Exception raised when a site does not lie strictly inside the bounding box."""
    def __init__(self, site_id: int, site: Any, bbox: Any):
        self.site_id = site_id
        self.site = site
        self.bbox = bbox
        super().__init__(f"Site {site_id} at {site} is not strictly inside {bbox}")


class InvalidBoundingBoxError(VoronoiError):
    """Exception raised for bounding boxes with non-positive width or height."""
    pass


class ProximityError(VoronoiError):
    """Exception raised for proximity-structure errors."""
    pass


class InvalidMappingError(ProximityError):
    """Exception raised when a site mapping is not total or points outside its target."""
    pass


class DimensionError(ProximityError):
    """Exception raised when two distinct cells overlap in a two-dimensional set."""
    pass


class TopologySizeError(ProximityError):
    """Exception raised when the family closure grows past its limit."""
    def __init__(self, family_count: int, max_families: int):
        self.family_count = family_count
        self.max_families = max_families
        super().__init__(
            f"Leader topology closure reached {family_count} families, above the limit of {max_families}"
        )


class CentroidalError(VoronoiError):
    """Exception raised by centroidal tessellation."""
    pass


class EmptySupportError(CentroidalError):
    """Exception raised when a cell contains no positive-density pixel."""
    def __init__(self, site_id: Optional[int] = None):
        self.site_id = site_id
        label = f"cell {site_id}" if site_id is not None else "cell"
        super().__init__(f"No positive-density pixel lies in {label}")


class DensityGridError(CentroidalError):
    """Exception raised for density grids without positive finite values."""
    pass


class FileFormatError(VoronoiError):
    """Base exception for file parsing errors."""
    pass


class SiteFileParseError(FileFormatError):
    """Exception raised when a sites document cannot be parsed."""
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"Sites file error: {message}{location}")


class DiagramFileError(FileFormatError):
    """Exception raised when a diagram document is malformed or inconsistent."""
    pass


class PgmFormatError(FileFormatError):
    """Exception raised for malformed portable grey-map data."""
    pass


class ConfigurationError(VoronoiError):
    """Exception raised for configuration errors."""
    pass


class InvalidParameterError(VoronoiError):
    """Exception raised for out-of-range operation parameters."""
    pass


# ============================================================================
# Error Logging Wrapper
# ============================================================================

def log_errors(func: Callable) -> Callable:
    """
    Decorator to log exceptions with full context.

    Args:
        func: Function to wrap

    Returns:
        Decorated function that logs errors before raising

    Example:
        >>> @log_errors
        ... def load_density(path, bbox):
        ...     pass
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> Any:
        try:
            return func(*args, **kwargs)
        except Exception as e:
            logger.error(
                f"Error in {func.__name__}: {type(e).__name__}: {str(e)}",
                exc_info=True,
                extra={
                    'function': func.__name__,
                    'function_args': str(args)[:200],
                    'function_kwargs': str(kwargs)[:200]
                }
            )
            raise

    return wrapper


# ============================================================================
# Error Context Manager
# ============================================================================

class ErrorContext:
    """
    Context manager for consistent error handling and logging.

    Example:
        >>> with ErrorContext("Building diagram", sites=12):
        ...     build_diagram(sites, bbox)
    """

    def __init__(self, operation: str, **context):
        """
        Initialize error context.

        Args:
            operation: Description of the operation
            **context: Additional context key-value pairs
        """
        self.operation = operation
        self.context = context

    def __enter__(self):
        logger.debug(f"Starting: {self.operation}", extra=self.context)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if exc_type is not None:
            logger.error(
                f"Failed: {self.operation} - {exc_type.__name__}: {exc_val}",
                exc_info=True,
                extra=self.context
            )
        else:
            logger.debug(f"Completed: {self.operation}", extra=self.context)
        # Return False to propagate exceptions
        return False


# ============================================================================
# Violation Tracker Class
# ============================================================================

class ViolationTracker:
    """
    Track invariant violations and warnings during oracle checks.

    Example:
        >>> tracker = ViolationTracker()
        >>> tracker.add_violation('cell', 3, 'not convex')
        >>> tracker.has_violations()
        True
    """

    def __init__(self, max_details: int = 50):
        """
        Initialize empty violation and warning lists.

        Args:
            max_details: Number of violation entries kept for the report;
                         the count keeps growing past it.
        """
        self.max_details = max_details
        self.violation_count = 0
        self.violations: List[Dict[str, Any]] = []
        self.warnings: List[Dict[str, Any]] = []

    def add_violation(self, entity_type: str, identifier: Any, message: str) -> None:
        """
        Add a violation to the tracker.

        Args:
            entity_type: Kind of checked entity (e.g. 'cell', 'edge', 'pair')
            identifier: Identifier of the entity (site id, pair, grid index)
            message: Violation message
        """
        self.violation_count += 1
        if len(self.violations) < self.max_details:
            self.violations.append({
                'type': entity_type,
                'id': identifier,
                'message': message
            })
        logger.warning(f"[{entity_type}:{identifier}] {message}")

    def add_warning(self, entity_type: str, identifier: Any, message: str) -> None:
        """Add a warning to the tracker."""
        self.warnings.append({
            'type': entity_type,
            'id': identifier,
            'message': message
        })
        logger.warning(f"[{entity_type}:{identifier}] {message}")

    def has_violations(self) -> bool:
        """Return True if any violations have been recorded."""
        return self.violation_count > 0

    def get_summary(self) -> dict:
        """
        Get a summary of all violations and warnings.

        Returns:
            Dictionary with counts and the retained details
        """
        return {
            'violation_count': self.violation_count,
            'warning_count': len(self.warnings),
            'violations': self.violations,
            'warnings': self.warnings
        }

    def clear(self) -> None:
        """Clear all violations and warnings."""
        self.violation_count = 0
        self.violations = []
        self.warnings = []
