"""Exact analysis toolkit for multicast network design games on rings."""
