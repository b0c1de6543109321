package gui;

import javax.swing.JFrame;

public class drawingShapes extends JFrame {

    public drawingShapes() {
        super("Drawing Shapes");
        setSize(400, 300);
        setVisible(true);
    }

    public static void main(String args[]) {
        drawingShapes application = new drawingShapes();
        application.setDefaultCloseOperation(JFrame.EXIT_ON_CLOSE);
    }
}
