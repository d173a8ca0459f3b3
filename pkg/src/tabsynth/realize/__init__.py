from .external import (EndpointUnavailableError, ExternalRealizer,
                       GeneratorEndpoint, realize_external)
from .rules import Realization, check_fidelity, realize_rule, required_surfaces

__all__ = [
    "EndpointUnavailableError",
    "ExternalRealizer",
    "GeneratorEndpoint",
    "Realization",
    "check_fidelity",
    "realize_external",
    "realize_rule",
    "required_surfaces",
]
