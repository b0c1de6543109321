package coreElements;

import java.awt.Color;
import java.awt.Graphics;

/** Base class for the drawable shapes. */
public abstract class MyShape {
    private int x1, y1, x2, y2;
    private Color color;

    public MyShape() {
        this(0, 0, 0, 0, Color.BLACK);
    }

    public MyShape(int x1, int y1, int x2, int y2, Color color) {
        this.x1 = x1;
        this.y1 = y1;
        this.x2 = x2;
        this.y2 = y2;
        this.color = color;
    }

    public int getX1() { return x1; }
    public int getY1() { return y1; }
    public int getX2() { return x2; }
    public int getY2() { return y2; }

    public Color getColor() {
        return color;
    }

    public void setColor(Color color) {
        this.color = color;
    }

    public abstract void draw(Graphics g);
}
