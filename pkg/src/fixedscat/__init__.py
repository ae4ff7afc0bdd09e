"""Forward scattering and certification toolkit for fixed-incident-direction
inverse potential scattering in three dimensions."""

__version__ = "0.1.0"
