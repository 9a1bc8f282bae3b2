"""Tests for kinbound.experiments."""
