"""Deterministic simulator of a hybrid human/solar/electric vehicle.

Models the energy system end to end: clear-sky irradiance at a site, a
rooftop PV array behind a charge controller, a Peukert-corrected battery
bank, an averaged-PWM series DC motor sharing an axle with the pedals
through a freewheel clutch, and longitudinal vehicle dynamics, all wired
into a fixed-step scenario engine with an exact energy audit.
"""

__version__ = "0.1.0"
