"""Test suite for aquarange."""
