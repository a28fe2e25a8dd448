"""Simulated four-sonar indoor robot: reflex layer, serial link, learned planner."""
