"""recimap - laboratório exato para transformações recíprocas e suas extensões de Maharam."""

__version__ = "0.1.0"
