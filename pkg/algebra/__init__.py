"""Exact algebra over finite fields: elements, polynomials and Grothendieck classes."""
