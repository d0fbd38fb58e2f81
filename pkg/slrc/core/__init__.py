"""Configuration, errors, random streams and serialization shared by every subpackage."""
