from .observation import ObservationSpec, observe, observed_range

__all__ = ["ObservationSpec", "observe", "observed_range"]
