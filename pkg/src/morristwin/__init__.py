"""morristwin: a digital-twin orchestrator that keeps simulated robot
cells replicating an authoritative Nine Men's Morris game state."""

__version__ = "0.1.0"
