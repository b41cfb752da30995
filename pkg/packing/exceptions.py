"""
Exceptions du solveur de chargement ULD
=======================================

Une seule exception métier porte un code d'erreur et un dictionnaire de détails,
sur le modèle des exceptions de service du projet.
"""
from typing import Any, Dict, Optional


class PackingException(Exception):
    """Exception personnalisée pour les erreurs du solveur"""

    def __init__(self, message: str, error_code: str = "", details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}

    def __str__(self):
        base = super().__str__()
        return f"[{self.error_code}] {base}" if self.error_code else base


class BudgetExhausted(PackingException):
    """Signal interne : le budget de vérifications de points extrêmes est épuisé."""

    def __init__(self, used: int):
        super().__init__(
            f"Budget de vérifications épuisé après {used} vérifications",
            error_code="BUDGET_EXHAUSTED",
            details={'used': used},
        )
