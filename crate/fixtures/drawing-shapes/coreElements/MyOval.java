package coreElements;

import java.awt.Color;
import java.awt.Graphics;

public class MyOval extends MyShape {
    private boolean example;

    public MyOval(int x1, int y1, int x2, int y2, Color color, boolean example) {
        super(x1, y1, x2, y2, color);
        this.example = example;
    }

    public void draw(Graphics g) {
        g.setColor(getColor());
        if (example) {
            g.fillOval(getX1(), getY1(), getX2() - getX1(), getY2() - getY1());
        } else {
            g.drawOval(getX1(), getY1(), getX2() - getX1(), getY2() - getY1());
        }
    }
}
