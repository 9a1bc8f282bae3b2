"""Tests for kinbound.geometry."""
