"""Независимые эталоны для проверки спектральных операторов."""

import numpy as np

# Коэффициенты центральных разностей 6-го порядка, смещения -3..3
FIRST_DERIVATIVE = (-1 / 60, 3 / 20, -3 / 4, 0.0, 3 / 4, -3 / 20, 1 / 60)
SECOND_DERIVATIVE = (1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90)


def points(size: int) -> np.ndarray:
    return 2 * np.pi * np.arange(size) / size


def green_kernel(x: np.ndarray) -> np.ndarray:
    """Периодическая функция Грина (1-∂²)^{-1}: cosh(π-|x|)/(2 sinh π), |x| <= π."""
    wrapped = np.abs((x + np.pi) % (2 * np.pi) - np.pi)
    return np.cosh(np.pi - wrapped) / (2 * np.sinh(np.pi))


def helmholtz_by_quadrature(func, eval_points: np.ndarray, fine_size: int = 4096) -> np.ndarray:
    """
    (1-∂²)^{-1} f в точках eval_points прямой свёрткой с функцией Грина.

    Трапеции с излом ядра в узле; поправка Эйлера–Маклорена -h²/12·f(x) убирает
    главную ошибку от скачка производной ядра.
    """
    h = 2 * np.pi / fine_size
    result = np.empty(len(eval_points))
    for i, x in enumerate(eval_points):
        nodes = x + h * np.arange(fine_size)
        result[i] = h * np.sum(green_kernel(nodes - x) * func(nodes)) - h**2 / 12 * func(x)
    return result


def fd_derivative(values: np.ndarray, order: int) -> np.ndarray:
    """Периодическая конечная разность 6-го порядка."""
    h = 2 * np.pi / len(values)
    stencil = FIRST_DERIVATIVE if order == 1 else SECOND_DERIVATIVE
    result = np.zeros_like(values)
    for offset, weight in zip(range(-3, 4), stencil):
        result += weight * np.roll(values, -offset)
    return result / h**order


def fd_helmholtz(values: np.ndarray) -> np.ndarray:
    """Решение (I - D2) w = f с конечно-разностной матрицей D2."""
    size = len(values)
    h = 2 * np.pi / size
    matrix = np.eye(size)
    for offset, weight in zip(range(-3, 4), SECOND_DERIVATIVE):
        matrix -= weight / h**2 * np.roll(np.eye(size), offset, axis=1)
    return np.linalg.solve(matrix, values)


def fd_rhs(u: np.ndarray, v: np.ndarray, p: int, q: int, a: float, b: float):
    """Правая часть системы целиком в конечных разностях на мелкой сетке."""

    def component(own, other, power, coeff):
        power_x = fd_derivative(other**power, 1)
        own_x = fd_derivative(own, 1)
        own_xx = fd_derivative(own, 2)
        local = coeff / power * power_x * own + (power - coeff) / power * power_x * own_xx
        nonlocal_part = fd_helmholtz(local) + fd_helmholtz(fd_derivative(power_x * own_x, 1))
        return -(other**power) * own_x - nonlocal_part

    return component(u, v, p, a), component(v, u, q, b)


def camassa_holm_rhs(u: np.ndarray) -> np.ndarray:
    """Уравнение Камассы–Холма: u_t = -u u_x - ∂x(1-∂²)^{-1}(u² + u_x²/2), через np.fft."""
    size = len(u)
    k = np.fft.fftfreq(size, d=1.0 / size)
    u_x = np.real(np.fft.ifft(1j * k * np.fft.fft(u)))
    source = np.fft.fft(u**2 + 0.5 * u_x**2)
    pressure_x = np.real(np.fft.ifft(1j * k * source / (1 + k**2)))
    return -u * u_x - pressure_x
