"""Тесты для wpheight."""
