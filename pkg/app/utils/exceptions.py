class AnalysisException(Exception):
    """
    分析流程的结构化异常（命令行版的 HTTPException）

    参数：
        detail: 面向用户的错误描述
        exit_code: 命令行退出码（见 README 退出码表）
    """
    exit_code: int = 1

    def __init__(self, detail: str, exit_code: int | None = None):
        super().__init__(detail)
        self.detail = detail
        if exit_code is not None:
            self.exit_code = exit_code


class SpecParseError(AnalysisException):
    exit_code = 2


class SpecDimensionError(AnalysisException):
    """矩阵维度与 (n, m) 不一致，matrix 字段指明出错的矩阵"""
    exit_code = 2

    def __init__(self, matrix: str, expected: tuple, actual: tuple):
        super().__init__(f"矩阵 {matrix} 维度错误：期望 {expected}，实际 {actual}")
        self.matrix = matrix
        self.expected = expected
        self.actual = actual


class UnknownExampleError(AnalysisException):
    exit_code = 2


class ValidationFailedError(AnalysisException):
    exit_code = 1

    def __init__(self, report):
        failed = [c.name for c in report.checks if not c.passed]
        super().__init__(f"结构假设校验失败：{', '.join(failed)}")
        self.report = report


class PassivityFailedError(AnalysisException):
    exit_code = 1

    def __init__(self, certificate):
        super().__init__(f"阻抗无源性校验失败：{certificate.diagnostic or '二次型非半负定'}")
        self.certificate = certificate


class NonHermitianError(AnalysisException):
    exit_code = 1


class NotPositiveDefiniteError(AnalysisException):
    exit_code = 1


class NumericalInconsistencyError(AnalysisException):
    exit_code = 1


class ResolventError(AnalysisException):
    """边值问题在该 s 处不可解（s 不在预解集中或系统在 s 处病态）"""
    exit_code = 4


class ClosureSingularError(AnalysisException):
    exit_code = 5

    def __init__(self, detail: str, block=None):
        super().__init__(detail)
        self.block = block
