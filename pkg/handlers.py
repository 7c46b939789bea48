import argparse
import dataclasses
import logging
from fractions import Fraction
from string import Template
from typing import Any, Awaitable, Callable, Dict, List, NamedTuple

from background_tasks import CorpusTasks, summarize
from config import Config
from cremona.constructions import DiagonalSpec
from cremona.errors import UsageError, VerificationError
from cremona.group_lab import (
    SymbolicDiagonal,
    conjugate_by_word,
    count_reduced_words,
    diag_orbit_classify,
    generator_images,
    no_relation_certificate,
    parse_word,
    relation_search,
    word_matrix,
)
from cremona.leading import g_form, is_sl_prime, leading_pair, predict_leading, rho
from cremona.newton import (
    MAX_VOLUME_DIM,
    LatticePolytope,
    is_standard_simplex,
    newton_body_levels,
    newton_polytope,
    normalized_volume,
    sigma_system,
)
from cremona.parser import MapFile, load_map_file, parse_points, parse_polynomial
from cremona.polynomial import substitute
from cremona.projective import (
    AffinePolyMap,
    ProjectiveMap,
    compose,
    compose_affine,
    contracts_to_point,
    equals_projectively,
    jacobian_det,
    restrict_to_hyperplane,
    verify_inverse_pair,
)
from utils.analytics_logger import AnalyticsLogger

logger = logging.getLogger(__name__)


class LogTemplates:
    COMMAND = Template("Running command $name")
    NOT_INVERSE = Template("Maps $name and $inverse are not mutually inverse")
    RELATION = Template("Relation found among words of length <= $length: $witness")
    MISMATCH = Template("Predicted leading pair $predicted differs from computed $actual")


class CommandResult(NamedTuple):
    payload: Any
    passed: bool = True


Handler = Callable[[argparse.Namespace], Awaitable[CommandResult]]


class LabHandlers:
    def __init__(self, config: Config):
        """
        Инициализация обработчиков команд
        Args:
            config: Конфигурация приложения
        """
        self.config = config
        self.commands: Dict[str, Handler] = {}
        self.setup_handlers()

    def command(self, name: str) -> Callable[[Handler], Handler]:
        def register(func: Handler) -> Handler:
            self.commands[name] = func
            return func
        return register

    @staticmethod
    def _load(args: argparse.Namespace) -> MapFile:
        if not args.file:
            raise UsageError(f"command {args.command!r} needs a map file")
        return load_map_file(args.file)

    @staticmethod
    def _single(args: argparse.Namespace) -> str:
        if not args.map or len(args.map) != 1:
            raise UsageError(f"command {args.command!r} needs exactly one -m NAME")
        return args.map[0]

    def _projective(self, args: argparse.Namespace) -> ProjectiveMap:
        return self._load(args).get_map(self._single(args))

    def setup_handlers(self):
        """Настройка обработчиков команд"""

        @self.command("parse")
        async def cmd_parse(args: argparse.Namespace) -> CommandResult:
            if args.poly is not None:
                if args.n is None:
                    raise UsageError("parse --poly needs -n")
                return CommandResult({"polynomial": parse_polynomial(args.poly, args.n)})
            bundle = self._load(args)
            maps = {
                name: {"components": f, "degree": f.degree, "g_form": g_form(f) is not None}
                for name, f in sorted(bundle.maps.items())
            }
            return CommandResult({"n": bundle.ambient_n, "maps": maps,
                                  "affine": dict(sorted(bundle.affine.items()))})

        @self.command("compose")
        async def cmd_compose(args: argparse.Namespace) -> CommandResult:
            if not args.map or len(args.map) != 2:
                raise UsageError("compose needs -m G -m F (computes G∘F)")
            bundle = self._load(args)
            g, f = (bundle.get_map(name) for name in args.map)
            composite = compose(g, f, normalize=args.normalize)
            return CommandResult({
                "map": composite,
                "degree": composite.degree,
                "identity": equals_projectively(composite, ProjectiveMap.identity(composite.ambient_n)),
            })

        @self.command("rho")
        async def cmd_rho(args: argparse.Namespace) -> CommandResult:
            bundle = self._load(args)
            name = self._single(args)
            f = bundle.get_map(name)
            matrix = rho(f)
            payload = {"matrix": matrix, "det": matrix.det(), "sl_prime": is_sl_prime(matrix)}
            if args.inverse:
                inverse = bundle.get_map(args.inverse)
                if not verify_inverse_pair(f, inverse):
                    logger.warning(LogTemplates.NOT_INVERSE.substitute(name=name, inverse=args.inverse))
                    raise VerificationError(f"{args.inverse} is not the inverse of {name}")
                inverse_matrix = rho(inverse)
                if inverse_matrix != matrix.inverse():
                    raise VerificationError(f"rho({args.inverse}) is not rho({name})^-1")
                payload["inverse_matrix"] = inverse_matrix
            return CommandResult(payload)

        @self.command("gform")
        async def cmd_gform(args: argparse.Namespace) -> CommandResult:
            return CommandResult({"g_form": g_form(self._projective(args))})

        @self.command("predict-leading")
        async def cmd_predict_leading(args: argparse.Namespace) -> CommandResult:
            if args.poly is None:
                raise UsageError("predict-leading needs --poly")
            f = self._projective(args)
            h = parse_polynomial(args.poly, f.ambient_n)
            predicted = predict_leading(h, f)
            actual = leading_pair(substitute(h, f.normalized().components))
            if predicted != actual:
                logger.warning(LogTemplates.MISMATCH.substitute(predicted=predicted, actual=actual))
            return CommandResult({"predicted": predicted, "actual": actual}, passed=predicted == actual)

        @self.command("newton")
        async def cmd_newton(args: argparse.Namespace) -> CommandResult:
            if args.poly is not None:
                if args.n is None:
                    raise UsageError("newton --poly needs -n")
                polytope = newton_polytope(parse_polynomial(args.poly, args.n))
                return CommandResult({"polytope": polytope, "volume": _volume(polytope)})
            level = self.config.lab.newton_level if args.level is None else args.level
            levels, stable = newton_body_levels(sigma_system(self._projective(args), args.reading), level)
            return CommandResult({
                "levels": levels,
                "stable": stable,
                "standard_simplex": is_standard_simplex(levels[-1]),
                "volume": _volume(levels[-1]),
            })

        @self.command("volume")
        async def cmd_volume(args: argparse.Namespace) -> CommandResult:
            if args.points is None:
                raise UsageError("volume needs --points")
            points = parse_points(args.points)
            if not points:
                raise UsageError("volume needs at least one point")
            polytope = LatticePolytope.from_points(points, len(points[0]))
            return CommandResult({"polytope": polytope, "volume": normalized_volume(polytope)})

        @self.command("contracts")
        async def cmd_contracts(args: argparse.Namespace) -> CommandResult:
            if args.hyperplane is None:
                raise UsageError("contracts needs --hyperplane")
            attempts = self.config.lab.contraction_attempts if args.attempts is None else args.attempts
            point = contracts_to_point(self._projective(args), args.hyperplane, attempts)
            return CommandResult({"hyperplane": args.hyperplane, "point": point, "contracts": point is not None})

        @self.command("restrict")
        async def cmd_restrict(args: argparse.Namespace) -> CommandResult:
            if args.hyperplane is None:
                raise UsageError("restrict needs --hyperplane")
            restriction = restrict_to_hyperplane(self._projective(args), args.hyperplane)
            return CommandResult({
                "hyperplane": args.hyperplane,
                "components": list(restriction.components),
                "vanishes": restriction.vanishes,
                "nonzero_indices": restriction.nonzero_indices,
            })

        @self.command("jacobian")
        async def cmd_jacobian(args: argparse.Namespace) -> CommandResult:
            bundle = self._load(args)
            name = self._single(args)
            psi = bundle.get_affine(name)
            det = jacobian_det(psi)
            payload = {"jacobian": det, "constant": det.is_constant}
            if args.inverse:
                inverse = bundle.get_affine(args.inverse)
                identity = AffinePolyMap.identity(psi.dim)
                if compose_affine(psi, inverse) != identity or compose_affine(inverse, psi) != identity:
                    logger.warning(LogTemplates.NOT_INVERSE.substitute(name=name, inverse=args.inverse))
                    raise VerificationError(f"{args.inverse} is not the inverse of {name}")
                payload["inverse_jacobian"] = jacobian_det(inverse)
            return CommandResult(payload)

        @self.command("freegroup")
        async def cmd_freegroup(args: argparse.Namespace) -> CommandResult:
            length = self.config.lab.corpus_word_length if args.len is None else args.len
            workers = args.workers or self.config.lab.workers
            image_a, image_b = generator_images(args.gens, args.n or 4)
            distinct = no_relation_certificate(image_a, image_b, length, workers)
            payload = {
                "generators": {"A": image_a, "B": image_b},
                "max_length": length,
                "words_checked": count_reduced_words(length),
                "distinct": distinct,
            }
            if not distinct:
                report = relation_search(image_a, image_b, length)
                logger.warning(LogTemplates.RELATION.substitute(length=length, witness=report.witness))
                payload["witness"] = report.witness
            return CommandResult(payload, passed=distinct)

        @self.command("conjugate")
        async def cmd_conjugate(args: argparse.Namespace) -> CommandResult:
            if args.word is None:
                raise UsageError("conjugate needs --word")
            f = self._projective(args)
            word = parse_word(args.word)
            image = conjugate_by_word(word, f)
            payload: Dict[str, Any] = {"word": word, "map": image}
            if g_form(f) is not None:
                matrix = word_matrix(word, f.ambient_n)
                predicted = matrix.inverse() @ rho(f) @ matrix
                payload["rho"] = rho(image)
                payload["predicted_rho"] = predicted
                return CommandResult(payload, passed=payload["rho"] == predicted)
            return CommandResult(payload)

        @self.command("diag-classify")
        async def cmd_diag_classify(args: argparse.Namespace) -> CommandResult:
            length = self.config.lab.classify_word_length if args.len is None else args.len
            if (args.lambdas is None) == (args.symbolic is None):
                raise UsageError("diag-classify needs exactly one of --lambdas and --symbolic")
            if args.lambdas is not None:
                target = DiagonalSpec(tuple(_fractions(args.lambdas)))
            else:
                n = args.n or 4
                target = SymbolicDiagonal.all_equal(n) if args.symbolic == "all_equal" else SymbolicDiagonal.generic(n)
            return CommandResult(diag_orbit_classify(target, length))

        @self.command("corpus")
        async def cmd_corpus(args: argparse.Namespace) -> CommandResult:
            lab = self.config.lab
            if args.workers:
                lab = dataclasses.replace(lab, workers=args.workers)
            tasks = CorpusTasks(lab, self.config.logging.analytics_dir)
            try:
                results = await tasks.run(args.entry)
                status = await tasks.get_status()
            finally:
                await tasks.stop()
            summary = summarize(results)
            summary["completed"] = status["completed"]
            return CommandResult(summary, passed=not summary["failed"])

        @self.command("analytics")
        async def cmd_analytics(args: argparse.Namespace) -> CommandResult:
            analytics_dir = self.config.logging.analytics_dir
            if not analytics_dir:
                raise UsageError("analytics needs ANALYTICS_DIR")
            analytics = AnalyticsLogger(analytics_dir)
            if args.keep_days:
                analytics.cleanup_old_data(days_to_keep=args.keep_days)
            stats = analytics.get_corpus_statistics(days=args.days)
            return CommandResult(stats, passed="error" not in stats)

    async def dispatch(self, args: argparse.Namespace) -> CommandResult:
        """
        Вызов обработчика подкоманды
        Args:
            args: Разобранные аргументы командной строки
        Returns:
            CommandResult: Полезная нагрузка отчета и признак выполнения проверок
        """
        logger.info(LogTemplates.COMMAND.substitute(name=args.command))
        return await self.commands[args.command](args)

    def get_commands(self) -> List[str]:
        """Имена зарегистрированных подкоманд"""
        return sorted(self.commands)


def _volume(polytope: LatticePolytope):
    if polytope.dim > MAX_VOLUME_DIM:
        return None
    return normalized_volume(polytope)


def _fractions(text: str):
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"bad scalar list {text!r}: {e}") from e
