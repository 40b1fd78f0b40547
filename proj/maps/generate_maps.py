#!/usr/bin/env python3
"""Regenerates the bundled occupancy maps (binary PGM, 255 = free, 0 = occupied).

Run from anywhere: python3 maps/generate_maps.py
"""

from pathlib import Path

HERE = Path(__file__).resolve().parent


class Canvas:
    def __init__(self, width, height, fill=0):
        self.width = width
        self.height = height
        self.px = bytearray([fill] * (width * height))

    def rect(self, x0, y0, x1, y1, value):
        """Fill [x0, x1) x [y0, y1)."""
        for y in range(max(0, y0), min(self.height, y1)):
            row = y * self.width
            for x in range(max(0, x0), min(self.width, x1)):
                self.px[row + x] = value

    def free(self, x0, y0, x1, y1):
        self.rect(x0, y0, x1, y1, 255)

    def block(self, x0, y0, x1, y1):
        self.rect(x0, y0, x1, y1, 0)

    def save(self, name):
        header = f"P5\n# {name}\n{self.width} {self.height}\n255\n".encode()
        (HERE / name).write_bytes(header + bytes(self.px))


def multi_room():
    # Office-like floor: a long corridor with rooms on both sides, one door each.
    c = Canvas(240, 160)
    c.free(10, 72, 230, 88)        # corridor
    c.free(10, 10, 75, 62)         # top rooms
    c.free(85, 10, 150, 62)
    c.free(160, 10, 230, 62)
    c.free(10, 98, 110, 150)       # bottom rooms
    c.free(120, 98, 230, 150)
    c.free(55, 62, 67, 72)         # doors (top)
    c.free(95, 62, 107, 72)
    c.free(200, 62, 212, 72)
    c.free(30, 88, 42, 98)         # doors (bottom)
    c.free(180, 88, 192, 98)
    c.block(30, 25, 50, 45)        # furniture
    c.block(105, 25, 130, 40)
    c.block(150, 112, 170, 134)
    c.block(60, 115, 80, 140)
    c.block(195, 30, 215, 45)
    c.save("multi_room.pgm")


def narrow_passage():
    # Two open halves joined by a single 6 px gap in a thick wall.
    c = Canvas(160, 100, fill=255)
    c.block(0, 0, 160, 4)
    c.block(0, 96, 160, 100)
    c.block(0, 0, 4, 100)
    c.block(156, 0, 160, 100)
    c.block(76, 0, 84, 100)
    c.free(76, 47, 84, 53)
    c.block(30, 40, 50, 60)
    c.block(110, 20, 130, 35)
    c.block(105, 65, 125, 80)
    c.save("narrow_passage.pgm")


def l_corridor():
    c = Canvas(100, 100)
    c.free(10, 10, 30, 90)
    c.free(10, 70, 90, 90)
    c.save("l_corridor.pgm")


def open_field():
    Canvas(50, 50, fill=255).save("open50.pgm")


if __name__ == "__main__":
    multi_room()
    narrow_passage()
    l_corridor()
    open_field()
