from ..config import JobConfig
from ..errors import ConfigError
from ..exact import format_rational, to_fraction
from ..oneparam import X, group_law_check, integrate_monomial, tangent_check
from ..series import TruncSeries
from .base_command import BaseCommand


class IntegrateCommand(BaseCommand):
    """Closed-form group of alpha x^m d/dx + beta x^(m-1), with tangent and group-law reports."""

    name = "integrate"
    formats = ("json",)

    def __init__(self, job: JobConfig, stream=None):
        super().__init__(job, stream)
        missing = [key for key in ("alpha", "m", "beta") if job.extra.get(key) is None]
        if missing:
            raise ConfigError(f"integrate needs --{', --'.join(missing)}")

    def render(self) -> str:
        alpha = to_fraction(self.job.extra["alpha"])
        beta = to_fraction(self.job.extra["beta"])
        m = int(self.job.extra["m"])
        lambda_order, x_order = self.job.orders.lambda_order, self.job.orders.x_order
        u = integrate_monomial(alpha, m, beta, lambda_order, x_order)
        q = TruncSeries.monomial(m, x_order, coeff=alpha, var=X)
        v = TruncSeries.monomial(m - 1, x_order, coeff=beta, var=X)
        reports = [self.report(tangent_check(u, q, v)), self.report(group_law_check(u))]
        field = f"{format_rational(alpha)} x^{m} d/dx + {format_rational(beta)} x^{m - 1}"
        self.logger.info(f"✅ Integrated {field}: {u.leading_terms(4)}")
        return self.json_text(self.document(field=field, prefsub=u.to_json(),
                                            reports=[r.to_json() for r in reports]))
