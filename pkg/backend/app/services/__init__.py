# Services package - the execution service imports the compiler and is
# imported from app.services.execution_service directly
from app.services.cluster_service import ClusterService, cluster_service
from app.services.pauli_frame_service import PauliFrameService, pauli_frame_service
from app.services.percolation_service import PercolationService, percolation_service

__all__ = [
    "ClusterService",
    "PauliFrameService",
    "PercolationService",
    "cluster_service",
    "pauli_frame_service",
    "percolation_service",
]
