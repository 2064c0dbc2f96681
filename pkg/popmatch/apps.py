from django.apps import AppConfig


class PopmatchConfig(AppConfig):
    name = "popmatch"
    verbose_name = "Popular matchings"
